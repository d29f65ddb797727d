"""
Triangular difference-count weights.
"""
from fractions import Fraction

import numpy as np
from pydantic import Field

from models.base import DomainModel


class TriangularWeight(DomainModel):
    """
    mu(h) = #{(h1, h2) in [H]^2 : h1 - h2 = h} / (delta^2 M), with H = floor(delta M).

    ``count(h)`` is the unnormalized pair count r_[H](h) = max(0, H - |h|).
    """
    delta: Fraction = Field(..., description="Scale in (0, 1]")
    M: int = Field(..., ge=1)
    H: int = Field(..., ge=1, description="floor(delta * M)")

    @property
    def normalizer(self) -> Fraction:
        return self.delta * self.delta * self.M

    def count(self, h: int) -> int:
        return max(0, self.H - abs(h))

    def value(self, h: int) -> Fraction:
        return Fraction(self.count(h)) / self.normalizer

    def offsets(self) -> np.ndarray:
        """All h with nonzero weight, ascending."""
        return np.arange(-(self.H - 1), self.H, dtype=np.int64)

    def counts(self) -> np.ndarray:
        """r_[H](h) aligned with ``offsets()``."""
        return self.H - np.abs(self.offsets())

    def values(self) -> np.ndarray:
        """Float weights aligned with ``offsets()``."""
        return self.counts().astype(np.float64) / float(self.normalizer)

    def mass(self) -> Fraction:
        """Exact l1 mass H^2 / (delta^2 M)."""
        return Fraction(self.H * self.H) / self.normalizer

    def l2_squared(self) -> Fraction:
        """Exact sum of squared weights."""
        total = sum(self.count(h) ** 2 for h in range(-(self.H - 1), self.H))
        return Fraction(total) / (self.normalizer * self.normalizer)
