"""
Combinatorial cubes over a set of m-tuples.
"""
import itertools
from typing import Iterator

from pydantic import Field

from models.base import DomainModel


def cube_vertices(k: tuple[int, ...], m: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """
    Vertices (k_{1 w_1}, ..., k_{m w_m}) of k = (k_10..k_m0, k_11..k_m1) with their weight |w|.

    Vertices come in ``itertools.product((0, 1), repeat=m)`` order.
    """
    for omega in itertools.product((0, 1), repeat=m):
        yield tuple(k[i + m * w] for i, w in enumerate(omega)), sum(omega)


class CubeSet(DomainModel):
    """All 2m-tuples k whose 2^m vertices lie in the base set H."""
    m: int = Field(..., ge=1)
    base: frozenset[tuple[int, ...]] = Field(default_factory=frozenset)

    def cubes(self) -> Iterator[tuple[int, ...]]:
        """Cubes in lexicographic order of (k_0, k_1)."""
        ordered = sorted(self.base)
        for k0 in ordered:
            for k1 in ordered:
                k = k0 + k1
                if all(v in self.base for v, _ in cube_vertices(k, self.m)):
                    yield k

    def count(self) -> int:
        return sum(1 for _ in self.cubes())

    def lower_bound(self, K: int) -> float:
        """|H|^(2^m) / K^(m 2^m - 2m) for H inside [K]^m."""
        m = self.m
        return float(len(self.base)) ** (2**m) / float(K) ** (m * 2**m - 2 * m)
