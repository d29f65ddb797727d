"""
Progression counting schemas.
"""
import math
from typing import Any, Optional

from pydantic import ConfigDict, Field, model_validator

from schemas.base import BaseSchema


class ProgressionInstance(BaseSchema):
    """The configuration x, x+y, x+qy^2 with y in [M] inside [N]."""
    N: int = Field(..., ge=1, description="Ambient interval [N]")
    q: int = Field(1, ge=1, description="Modulus")

    @model_validator(mode="after")
    def check_modulus(self) -> "ProgressionInstance":
        if self.q > self.N:
            raise ValueError(f"q={self.q} exceeds N={self.N}")
        return self

    @property
    def M(self) -> int:
        return math.isqrt(self.N // self.q)


class ProgressionWitness(BaseSchema):
    """A configuration {x, x+y, x+qy^2} inside the examined set."""
    x: int
    y: int = Field(..., ge=1)


class CountReport(BaseSchema):
    """Output of the ``count`` command."""
    model_config = ConfigDict(populate_by_name=True)

    lambda_: Any = Field(..., alias="lambda", description="Lambda_q value (int in exact mode)")
    witnesses: Optional[int] = Field(None, description="Number of witnesses when the inputs form a set")
    N: int
    q: int
    M: int
