"""
Number helpers: circle distance, rational coercion and continued fractions.
"""
import math
from fractions import Fraction
from typing import Callable

from exceptions import ParameterError


def circle_distance(x: float) -> float:
    """||x||, the distance from x to the nearest integer."""
    return abs(x - round(x))


def centered(x: float) -> float:
    """Representative of x mod 1 in (-1/2, 1/2]."""
    y = x - math.floor(x)
    return y - 1.0 if y > 0.5 else y


def to_fraction(value, name: str = "value") -> Fraction:
    """
    Coerce ints, floats, Fractions and "p/q" strings to a Fraction.

    Raises:
        ParameterError: If the value cannot be read as a rational
    """
    if isinstance(value, Fraction):
        return value
    try:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**12)
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParameterError(f"{name} is not a rational number: {value!r}") from exc


def continued_fraction(alpha: float, max_terms: int = 64) -> list[int]:
    """Partial quotients [a0, a1, ...] of a real number."""
    terms = []
    x = alpha
    for _ in range(max_terms):
        a = math.floor(x)
        terms.append(a)
        frac = x - a
        if frac < 1e-15:
            break
        x = 1.0 / frac
    return terms


def convergents(alpha: float, max_denominator: int) -> list[tuple[int, int]]:
    """
    Convergents p/q of alpha with q <= max_denominator, as (p, q) pairs.

    Args:
        alpha: Real number
        max_denominator: Largest denominator to keep

    Returns:
        Convergents in increasing order of denominator
    """
    result = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for a in continued_fraction(alpha):
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > max_denominator:
            break
        result.append((p, q))
    return result


def ternary_max(func: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """
    Ternary search for the maximum of a unimodal function on [lo, hi].

    Returns:
        (argument, value) at the midpoint of the final bracket
    """
    while hi - lo >= tol:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if func(m1) < func(m2):
            lo = m1
        else:
            hi = m2
    mid = (lo + hi) / 2
    return mid, func(mid)
