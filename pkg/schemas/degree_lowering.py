"""
Degree-lowering schemas: rational approximations, inequality checks and the pipeline report.
"""
from typing import Optional

from pydantic import Field

from schemas.base import BaseSchema, InequalityReport


class DenominatorResult(BaseSchema):
    """The t in [Tmax] minimizing ||q^2 t alpha||."""
    alpha: float
    q: int = Field(..., ge=1)
    t: int = Field(..., ge=1)
    a: int = Field(..., description="Nearest integer to q^2 t alpha")
    distance: float = Field(..., ge=0.0, description="||q^2 t alpha||")
    target_eps: Optional[float] = None
    meets_target: bool = True
    convergents: list[int] = Field(default_factory=list, description="Continued-fraction denominators up to Tmax")


class RationalApprox(BaseSchema):
    """alpha = a/b + k gamma/C + theta gamma/C mod 1 with |k| <= C and |theta| < 1."""
    a: int
    b: int = Field(..., ge=1)
    t: Optional[int] = None
    k: int
    theta: float = Field(..., ge=-1.0, le=1.0)
    gamma: float = Field(..., gt=0.0)
    C: float = Field(..., gt=0.0)

    def reconstruct(self) -> float:
        """The represented point of the circle in [0, 1)."""
        return (self.a / self.b + (self.k + self.theta) * self.gamma / self.C) % 1.0


class Lemma64Report(InequalityReport):
    """Derivative correlation sum against a power of the U^{m+1} norm."""
    mode: str
    exponent: float
    K: int
    m: int


class FiberCount(BaseSchema):
    a: int
    t: int
    k: int
    count: int = Field(..., ge=0)


class DegreeLowerReport(BaseSchema):
    """Every intermediate mass of the degree-lowering pipeline."""
    N: int
    q: int
    M: int
    K: int
    u: int
    s: int
    m: int
    gamma: float
    threshold: float = Field(..., description="gamma * K^2")
    upper_mass: float = Field(..., description="||F||_{U^s(u+qZ)}^{2^s}")
    upper_ratio: float = Field(..., description="upper_mass / K^(s+1)")
    lower_mass: float = Field(..., description="||F||_{U^{s-1}(u+qZ)}^{2^{s-1}}")
    lower_ratio: float = Field(..., description="lower_mass / K^s")
    tuples_examined: int = 0
    large_tuples: int = Field(0, description="|H|")
    cube_count: int = 0
    cube_lower_bound: float = 0.0
    off_arc_cubes: int = 0
    histogram: list[FiberCount] = Field(default_factory=list)
    dominant: Optional[FiberCount] = None
    anchor: Optional[list[int]] = None
    fiber_size: int = 0
    fiber_phase_center: Optional[float] = None
    fiber_mass: float = 0.0
    extended_mass: float = 0.0
    empty_stages: list[str] = Field(default_factory=list)
