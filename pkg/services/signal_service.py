"""
Signal service: shifts, multiplicative derivatives and subsampling.
"""
import logging
from typing import Sequence

import numpy as np

from exceptions import ParameterError
from models.signal import Signal

logger = logging.getLogger(__name__)


class SignalService:
    """Pure operators on finitely supported functions."""

    @staticmethod
    def shift(f: Signal, h: int) -> Signal:
        """T_h f(x) = f(x + h)."""
        if f.is_zero:
            return f
        return Signal.model_construct(offset=f.offset - int(h), values=f.values, exact_integer=f.exact_integer)

    @staticmethod
    def mult_derivative(f: Signal, h: int) -> Signal:
        """
        Multiplicative derivative Delta_h f(x) = f(x + h) * conj f(x).

        Args:
            f: Signal
            h: Difference parameter

        Returns:
            Signal supported on support(f) intersected with support(f) - h
        """
        return SignalService.asym_derivative(f, h, 0)

    @staticmethod
    def asym_derivative(f: Signal, h: int, hp: int) -> Signal:
        """Delta'_(h, hp) f(x) = f(x + h) * conj f(x + hp)."""
        if f.is_zero:
            return f
        lo = f.lo - min(h, hp)
        hi = f.hi - max(h, hp)
        if lo > hi:
            return Signal.zero()
        n = hi - lo + 1
        a = lo + h - f.offset
        b = lo + hp - f.offset
        values = f.values[a:a + n] * np.conj(f.values[b:b + n])
        return Signal.from_values(lo, values, exact=f.exact_integer)

    @staticmethod
    def iterated_derivative(f: Signal, hs: Sequence[int]) -> Signal:
        """Delta_{h_1, ..., h_k} f by composition."""
        g = f
        for h in hs:
            g = SignalService.mult_derivative(g, int(h))
            if g.is_zero:
                break
        return g

    @staticmethod
    def subsample(f: Signal, u: int, q: int) -> Signal:
        """
        x -> f(u + q x), the restriction of f to u + qZ read at unit spacing.

        Raises:
            ParameterError: Unless 1 <= u <= q
        """
        if q < 1 or not 1 <= u <= q:
            raise ParameterError(f"subsample needs 1 <= u <= q, got u={u}, q={q}")
        if f.is_zero:
            return f
        x0 = -((u - f.lo) // q)
        x1 = (f.hi - u) // q
        if x0 > x1:
            return Signal.zero()
        start = u + q * x0 - f.offset
        values = f.values[start:start + q * (x1 - x0) + 1:q]
        return Signal.from_values(x0, values, exact=f.exact_integer)

    @staticmethod
    def sample_multiples(f: Signal, q: int) -> Signal:
        """x -> f(q x)."""
        return SignalService.shift(SignalService.subsample(f, q, q), -1)

    @staticmethod
    def restrict(f: Signal, u: int, q: int) -> Signal:
        """f * 1_{u + qZ}, kept at its original positions."""
        if f.is_zero:
            return f
        mask = (f.positions() - u) % q == 0
        return Signal.from_values(f.offset, np.where(mask, f.values, 0), exact=f.exact_integer)

    @staticmethod
    def multiply(f: Signal, g: Signal) -> Signal:
        lo, hi = max(f.lo, g.lo), min(f.hi, g.hi)
        if f.is_zero or g.is_zero or lo > hi:
            return Signal.zero()
        exact = f.exact_integer and g.exact_integer
        return Signal.from_values(lo, f.window(lo, hi) * g.window(lo, hi), exact=exact)

    @staticmethod
    def conjugate(f: Signal) -> Signal:
        if f.exact_integer:
            return f
        return Signal.from_values(f.offset, np.conj(f.values), exact=False)

    @staticmethod
    def scale(f: Signal, c: complex) -> Signal:
        if f.is_zero:
            return f
        exact = f.exact_integer and c in (1, -1)
        return Signal.from_values(f.offset, f.values * c, exact=exact)

    @staticmethod
    def to_float(f: Signal) -> Signal:
        """Same function on the floating path."""
        if not f.exact_integer or f.is_zero:
            return f
        return Signal.from_values(f.offset, f.values, exact=False)
