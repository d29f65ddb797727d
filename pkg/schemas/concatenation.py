"""
Concatenation schemas: b-norm sweeps, box inverse metrics and the two-sided experiment.
"""
from fractions import Fraction
from typing import Optional

from pydantic import Field

from schemas.base import BaseSchema


class BNormRow(BaseSchema):
    b: int = Field(..., ge=1)
    value: float = Field(..., description="||f||_b^4")
    exceptional: bool = Field(..., description="b lies in the gcd-defined exceptional set")


class BNormSweep(BaseSchema):
    """||f||_b^4 over every b together with the local U^4 mass."""
    rows: list[BNormRow] = Field(default_factory=list)
    local_u4: float = Field(..., description="E_u ||f||_{U^4(u+qZ)}^16")
    exceptional_count: int = Field(..., ge=0)
    N: int
    q: int
    M: int


class ClassWitness(BaseSchema):
    """Anchor cell and frequencies chosen for one residue class mod gcd(c, d)."""
    k: int = Field(..., ge=0, description="Class index, x = m x' - k")
    y_anchor: Optional[int] = None
    z_anchor: Optional[int] = None
    gamma: float = 0.0
    gamma_prime: float = 0.0
    correlation: float = Field(..., ge=0.0)


class InvertBoxReport(BaseSchema):
    """Metrics of an arithmetic box inverse run."""
    c: int
    d: int
    gcd: int
    correlation: float = Field(..., description="|sum_x f(x) l(x) r(x)| recounted")
    l2_mass: float = Field(..., description="sum_x |f(x)|^2")
    candidates_tried: int = Field(..., ge=0)
    hypothesis: float = Field(..., description="sum mu(h1) mu(h2) Delta_{c h1, d h2} f summed over x")
    M: int
    epsilon: Fraction
    exceptional_count: int = Field(..., ge=0, description="#{x in support: l(x) != l(x + d z) for some z}")
    exceptional_bound: float
    bound_holds: bool
    periodic: bool
    classes: list[ClassWitness] = Field(default_factory=list)


class Box3Report(BaseSchema):
    """Correlation against three lower-dimensional functions versus the 3-D box norm."""
    corr: float
    box: float
    holds: bool


class ConcatReport(BaseSchema):
    """Both sides of the concatenation experiment."""
    lhs: float = Field(..., description="Triple box average")
    rhs: float = Field(..., ge=0.0, description="E_u ||f||_{U^5(u+qZ)}^32")
    N: int
    q: int
    M: int
    delta1: Fraction
    delta2: Fraction
    delta3: Fraction
    hypothesis_threshold: float = Field(..., description="delta3 * N * M^3")
    hypothesis_holds: bool
    lhs_ratio: float = Field(..., description="lhs / (N M^3)")
    rhs_ratio: float = Field(..., description="rhs / (N/q)^6")
    mode: str
    pairs_evaluated: int
