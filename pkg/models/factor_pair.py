"""
Factorizations f ~ l * r returned by the arithmetic box inverse.
"""
import numpy as np
from pydantic import Field

from models.base import DomainModel
from models.signal import Signal


class FactorPair(DomainModel):
    """
    A pair (l, r) with r exactly c-periodic.

    ``l`` is a finitely supported Signal. ``r`` is stored as one period,
    ``r_period[x mod c]``, so periodicity holds by construction on all of Z.
    """
    l: Signal
    r_period: np.ndarray = Field(..., description="r(x) = r_period[x mod c]")
    c: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    correlation: float = Field(..., ge=0.0, description="|sum_x f(x) l(x) r(x)|")

    def r_at(self, x: int) -> complex:
        return complex(self.r_period[x % self.c])

    def r_window(self, lo: int, hi: int) -> np.ndarray:
        """Dense values of r over [lo, hi]."""
        return self.r_period[np.arange(lo, hi + 1, dtype=np.int64) % self.c]

    def r_signal(self, lo: int, hi: int) -> Signal:
        """r restricted to [lo, hi] as a Signal."""
        return Signal.from_values(lo, self.r_window(lo, hi))

    def is_periodic(self, lo: int, hi: int) -> bool:
        """Recheck r(x) = r(x + c) over [lo, hi]."""
        return bool(np.array_equal(self.r_window(lo, hi), self.r_window(lo + self.c, hi + self.c)))
