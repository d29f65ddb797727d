"""
Finitely supported functions on the integers.
"""
from typing import Iterable, Optional

import numpy as np
from pydantic import Field

from models.base import DomainModel


def _is_ternary(values: np.ndarray) -> bool:
    if values.size == 0:
        return True
    if np.iscomplexobj(values):
        if np.any(values.imag != 0):
            return False
        values = values.real
    return bool(np.all((values == 0) | (values == 1) | (values == -1)))


class Signal(DomainModel):
    """
    A function f: Z -> C stored densely over its support interval.

    Cells outside [offset, offset + width - 1] are zero. Instances are always
    canonical: leading and trailing zeros are trimmed and the zero function
    has offset 0 and no cells, so equal functions compare equal. When every
    value lies in {-1, 0, 1} the values are held as int64 and
    ``exact_integer`` is set, which lets norm computations accumulate in
    integers.
    """
    offset: int = Field(..., description="Index of the first stored cell")
    values: np.ndarray = Field(..., description="Dense values over the support interval")
    exact_integer: bool = Field(..., description="All values in {-1, 0, 1}, held as int64")

    @classmethod
    def from_values(
        cls,
        offset: int,
        values,
        exact: Optional[bool] = None,
    ) -> "Signal":
        """
        Build a canonical signal.

        Args:
            offset: Position of values[0]
            values: Sequence or array of numbers
            exact: Force (True) or forbid (False) the integer representation;
                auto-detected when None

        Returns:
            Trimmed, read-only Signal
        """
        arr = np.asarray(values)
        if arr.ndim != 1:
            arr = arr.reshape(-1)
        nonzero = np.flatnonzero(arr)
        if nonzero.size == 0:
            return cls.zero()
        first, last = int(nonzero[0]), int(nonzero[-1])
        arr = arr[first:last + 1]
        ternary = _is_ternary(arr)
        if exact is None:
            exact = ternary
        elif exact and not ternary:
            raise ValueError("exact_integer signals take values in {-1, 0, 1}")
        if exact:
            stored = np.real(arr).astype(np.int64)
        else:
            stored = arr.astype(np.complex128)
        stored.setflags(write=False)
        return cls.model_construct(offset=int(offset) + first, values=stored, exact_integer=bool(exact))

    @classmethod
    def zero(cls) -> "Signal":
        empty = np.zeros(0, dtype=np.int64)
        empty.setflags(write=False)
        return cls.model_construct(offset=0, values=empty, exact_integer=True)

    @classmethod
    def interval(cls, n: int, start: int = 1) -> "Signal":
        """Indicator of [start, start + n - 1]; 1_[N] for the default start."""
        if n <= 0:
            return cls.zero()
        return cls.from_values(start, np.ones(n, dtype=np.int64))

    @classmethod
    def indicator(cls, elements: Iterable[int]) -> "Signal":
        """Indicator function of a finite set of integers."""
        points = np.unique(np.fromiter((int(x) for x in elements), dtype=np.int64))
        if points.size == 0:
            return cls.zero()
        lo = int(points[0])
        dense = np.zeros(int(points[-1]) - lo + 1, dtype=np.int64)
        dense[points - lo] = 1
        return cls.from_values(lo, dense)

    @property
    def width(self) -> int:
        return int(self.values.shape[0])

    @property
    def lo(self) -> int:
        return self.offset

    @property
    def hi(self) -> int:
        return self.offset + self.width - 1

    @property
    def is_zero(self) -> bool:
        return self.width == 0

    def at(self, x: int):
        if self.lo <= x <= self.hi:
            return self.values[x - self.offset]
        return 0

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense copy of f over [lo, hi], zero padded."""
        dtype = np.int64 if self.exact_integer else np.complex128
        out = np.zeros(max(0, hi - lo + 1), dtype=dtype)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b and not self.is_zero:
            out[a - lo:b - lo + 1] = self.values[a - self.offset:b - self.offset + 1]
        return out

    def as_complex(self) -> np.ndarray:
        return self.values.astype(np.complex128)

    def positions(self) -> np.ndarray:
        return np.arange(self.lo, self.lo + self.width, dtype=np.int64)

    def support(self) -> list[int]:
        return [int(x) + self.offset for x in np.flatnonzero(self.values)]

    def l2_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.width else 0.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return (
            self.offset == other.offset
            and self.width == other.width
            and bool(np.array_equal(self.values, other.values))
        )

    def __hash__(self) -> int:
        return hash((self.offset, (self.as_complex() + 0.0).tobytes()))

    def __repr__(self) -> str:
        kind = "exact" if self.exact_integer else "float"
        return f"Signal(offset={self.offset}, width={self.width}, {kind})"
