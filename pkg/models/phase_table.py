"""
Phase tables h -> phi(h) from per-tuple U^2 inversion.
"""
from pydantic import Field

from exceptions import ParameterError
from models.base import DomainModel
from schemas.norms import Frequency


class PhaseTable(DomainModel):
    """
    Frequencies phi(h) and correlations for derivatives of one function.

    Entry h holds the output of the U^2 inverse applied to
    x -> Delta_{q h_1, ..., q h_m} T_u F(q x).
    """
    q: int = Field(..., ge=1)
    u: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    entries: dict[tuple[int, ...], Frequency] = Field(default_factory=dict)

    def __contains__(self, h: tuple[int, ...]) -> bool:
        return tuple(h) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def phi(self, h: tuple[int, ...]) -> float:
        try:
            return self.entries[tuple(h)].beta
        except KeyError:
            raise ParameterError(f"phase table has no entry for h={tuple(h)}") from None

    def correlation(self, h: tuple[int, ...]) -> float:
        return self.entries[tuple(h)].correlation

    def shifted(self, constant: float) -> "PhaseTable":
        """Same table with every phase moved by a constant mod 1."""
        moved = {}
        for h, freq in self.entries.items():
            beta = (freq.beta + constant) % 1.0
            moved[h] = Frequency(beta=0.0 if beta >= 1.0 else beta, correlation=freq.correlation)
        return PhaseTable(q=self.q, u=self.u, m=self.m, entries=moved)
