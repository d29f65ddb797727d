"""
Base class for immutable domain objects.
"""
from pydantic import BaseModel, ConfigDict


class DomainModel(BaseModel):
    """Frozen value object that may hold numpy arrays."""
    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
    )
