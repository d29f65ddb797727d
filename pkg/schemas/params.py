"""
Parameter schemas shared by the averaging operators.
"""
import math
from fractions import Fraction

from pydantic import Field, field_validator, model_validator

from exceptions import ParameterError
from schemas.base import BaseSchema
from utils.numbers import to_fraction

DELTA_NAMES = ("delta", "delta1", "delta2", "delta3", "delta4", "delta5", "delta6", "gamma", "epsilon")


class Params(BaseSchema):
    """Scale N, modulus q and the named rational parameters in (0, 1]."""
    N: int = Field(..., ge=1, description="Length of the ambient interval [N]")
    q: int = Field(1, ge=1, description="Modulus of the configuration x, x+y, x+qy^2")
    deltas: dict[str, Fraction] = Field(default_factory=dict, description="Named rationals in (0, 1]")

    @field_validator("deltas", mode="before")
    @classmethod
    def coerce_deltas(cls, value):
        if value is None:
            return {}
        return {str(k): to_fraction(v, k) for k, v in dict(value).items()}

    @field_validator("deltas")
    @classmethod
    def check_deltas(cls, value: dict[str, Fraction]) -> dict[str, Fraction]:
        for name, delta in value.items():
            if name not in DELTA_NAMES:
                raise ValueError(f"unknown parameter name {name!r}")
            if not 0 < delta <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {delta}")
        return value

    @model_validator(mode="after")
    def check_modulus(self) -> "Params":
        if self.q > self.N:
            raise ValueError(f"q={self.q} exceeds N={self.N}")
        return self

    @property
    def M(self) -> int:
        """floor(sqrt(N/q)), computed as isqrt(floor(N/q))."""
        return math.isqrt(self.N // self.q)

    def delta(self, name: str) -> Fraction:
        try:
            return self.deltas[name]
        except KeyError:
            raise ParameterError(f"parameter {name} is required") from None

    def scaled(self, name: str) -> int:
        """floor(delta_name * M)."""
        return math.floor(self.delta(name) * self.M)
