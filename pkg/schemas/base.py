"""
Base schema classes for Pydantic models.
"""
from pydantic import BaseModel as PydanticBaseModel, ConfigDict, Field


class BaseSchema(PydanticBaseModel):
    """Base schema with common configuration."""
    model_config = ConfigDict(
        from_attributes=True,
        arbitrary_types_allowed=True,
    )


class InequalityReport(BaseSchema):
    """Both sides of a checked inequality and whether lhs <= rhs within slack."""
    lhs: float = Field(..., description="Left-hand side")
    rhs: float = Field(..., description="Right-hand side")
    holds: bool = Field(..., description="lhs <= rhs * (1 + slack)")
