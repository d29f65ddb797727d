"""
Density-increment schemas: steps, hints and iteration traces.
"""
from fractions import Fraction
from typing import Literal, Optional

from pydantic import Field

from schemas.base import BaseSchema
from schemas.progression import ProgressionWitness

TerminalStatus = Literal["progression_found", "N_too_small", "density_capped", "no_increment", "max_steps"]


class ModulusHint(BaseSchema):
    """A modulus suggested by the peak frequency of the balanced function."""
    beta: float = Field(..., ge=0.0, lt=1.0)
    correlation: float = Field(..., ge=0.0)
    t: int = Field(..., ge=1, description="Denominator minimizing ||q^2 t beta||")
    distance: float = Field(..., ge=0.0)


class IncrementStep(BaseSchema):
    """One density increment A_i -> A_{i+1} on a + q_i q' [N']."""
    i: int = Field(..., ge=0)
    N_i: int = Field(..., ge=1)
    q_i: int = Field(..., ge=1)
    alpha_i: Fraction
    qprime: int = Field(..., ge=1)
    a: int
    Nprime: int = Field(..., ge=1)
    alpha_new: Fraction
    hints: list[ModulusHint] = Field(default_factory=list)

    @property
    def step(self) -> int:
        return self.q_i * self.qprime

    @property
    def q_next(self) -> int:
        return self.q_i * self.q_i * self.qprime


class IncrementTrace(BaseSchema):
    """Recorded steps and the reason the iteration stopped."""
    N: int
    steps: list[IncrementStep] = Field(default_factory=list)
    status: TerminalStatus
    final_N: int
    final_q: int
    final_alpha: Fraction
    witness: Optional[ProgressionWitness] = None
