"""
Norm schemas: box directions and frequencies.
"""
from typing import Optional

import numpy as np
from pydantic import Field, model_validator

from schemas.base import BaseSchema


class Direction(BaseSchema):
    """A direction set Q = step * [length], or an explicit finite set of integers."""
    step: int = Field(1, description="Nonzero step of the progression")
    length: int = Field(1, ge=1, description="Number of terms step*1, ..., step*length")
    points: Optional[list[int]] = Field(None, description="Explicit set; overrides step/length")

    @model_validator(mode="after")
    def check_direction(self) -> "Direction":
        if self.points is not None:
            if not self.points:
                raise ValueError("explicit direction sets must be nonempty")
        elif self.step == 0:
            raise ValueError("direction step must be nonzero")
        return self

    def as_array(self) -> np.ndarray:
        if self.points is not None:
            return np.asarray(sorted(set(self.points)), dtype=np.int64)
        return self.step * np.arange(1, self.length + 1, dtype=np.int64)


class BoxSpec(BaseSchema):
    """Direction sets Q_1, ..., Q_d of a box norm."""
    directions: list[Direction] = Field(default_factory=list)

    @classmethod
    def from_steps(cls, steps: list[int], length: int) -> "BoxSpec":
        return cls(directions=[Direction(step=s, length=length) for s in steps])

    @classmethod
    def from_sets(cls, sets: list[list[int]]) -> "BoxSpec":
        return cls(directions=[Direction(points=list(s)) for s in sets])


class Frequency(BaseSchema):
    """A point beta of the circle with the correlation achieved there."""
    beta: float = Field(..., ge=0.0, lt=1.0, description="Frequency in [0, 1)")
    correlation: float = Field(..., ge=0.0, description="|sum_x f(x) e(beta x)|")


class NormReport(BaseSchema):
    """Output of the ``norm`` command."""
    s: int
    power: float | int = Field(..., description="||f||^(2^s)")
    norm: float
    u: Optional[int] = None
    q: Optional[int] = None
    width: int
    exact: bool


class BoxAverageResult(BaseSchema):
    """Output of the ``boxavg`` and ``bnorm`` commands."""
    value: float = Field(..., description="Average of weighted box-norm powers")
    pairs_evaluated: int = Field(..., ge=0)
    mode: str = Field(..., description="exact or montecarlo")
