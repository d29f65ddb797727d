"""
Gowers service: uniformity norms, box norms, inner products and the U^2 inverse.
"""
import itertools
import logging
from typing import Sequence

import numpy as np

from config import settings
from exceptions import ParameterError
from models.signal import Signal
from schemas.base import InequalityReport
from schemas.norms import BoxSpec, Frequency
from services.signal_service import SignalService
from utils.dft import autocorrelation, exponential_sum, grid_sums
from utils.feasibility import guard_u_norm
from utils.numbers import ternary_max
from utils.parallel import chunked_sum, chunks, ordered_map, tree_sum

logger = logging.getLogger(__name__)


def _derivative_rows(values: np.ndarray, hs: np.ndarray) -> np.ndarray:
    """Rows x -> v[x + h] * conj v[x] over the full window, one row per h."""
    width = values.shape[0]
    idx = np.arange(width)[None, :] + hs[:, None]
    valid = (idx >= 0) & (idx < width)
    shifted = np.where(valid, values[np.clip(idx, 0, width - 1)], 0)
    return shifted * np.conj(values)[None, :]


def _trimmed_derivative(values: np.ndarray, h: int) -> np.ndarray:
    width = values.shape[0]
    if abs(h) >= width:
        return values[:0]
    if h >= 0:
        return values[h:] * np.conj(values[:width - h])
    return values[:width + h] * np.conj(values[-h:])


def _box_base(values: np.ndarray, points: np.ndarray, exact: bool):
    """sum_x |sum_{h in Q} f(x + h)|^2; translation invariant, so offsets are dropped."""
    width = values.shape[0]
    top = int(points.max())
    acc = np.zeros(width + top - int(points.min()), dtype=values.dtype)
    for h in points:
        start = top - int(h)
        acc[start:start + width] += values
    if exact:
        return int(np.dot(acc, acc))
    return float(np.sum(np.abs(acc) ** 2))


def _box_pow(values: np.ndarray, sets: list[np.ndarray], exact: bool):
    """Peel the last direction: sum_t r_Q(t) box(Delta_t f; remaining directions)."""
    if values.shape[0] == 0:
        return 0 if exact else 0.0
    if len(sets) == 1:
        return _box_base(values, sets[0], exact)
    diffs, counts = _difference_counts(sets[-1])
    return tree_sum([int(c) * _box_pow(_trimmed_derivative(values, int(t)), sets[:-1], exact)
                     for t, c in zip(diffs, counts)])


def _u2_pow(values: np.ndarray, exact: bool):
    corr = autocorrelation(values, exact=exact)
    if exact:
        return int(np.dot(corr, corr))
    return float(np.sum(np.abs(corr) ** 2))


def _u3_batch(values: np.ndarray, hs: np.ndarray, exact: bool):
    corr = autocorrelation(_derivative_rows(values, hs), exact=exact)
    if exact:
        return int(np.sum(corr * corr))
    return float(np.sum(np.abs(corr) ** 2))


def _u_pow(values: np.ndarray, s: int, exact: bool, parallel: bool = False):
    """Sum over x, h_1..h_s of the iterated derivative, on a raw array."""
    width = values.shape[0]
    if width == 0:
        return 0 if exact else 0.0
    if s == 1:
        total = values.sum()
        return int(total) ** 2 if exact else float(abs(total) ** 2)
    if s == 2:
        return _u2_pow(values, exact)
    hs = np.arange(-(width - 1), width, dtype=np.int64)
    if s == 3:
        batches = chunks(hs)
        if parallel:
            return tree_sum(ordered_map(lambda batch: _u3_batch(values, batch, exact), batches))
        return tree_sum([_u3_batch(values, batch, exact) for batch in batches])

    def term(h):
        return _u_pow(_trimmed_derivative(values, int(h)), s - 1, exact)

    if parallel:
        return chunked_sum(term, list(hs))
    return tree_sum([term(h) for h in hs])


class GowersService:
    """Evaluation of U^s norms, box norms and Gowers inner products."""

    @staticmethod
    def u_norm_pow(f: Signal, s: int):
        """
        ||f||_{U^s}^{2^s} = sum_{x, h_1..h_s} Delta_{h_1..h_s} f(x).

        s = 1 gives |sum f|^2 and s = 2 the autocorrelation energy; larger s
        recurse over h with ||f||_{U^s}^{2^s} = sum_h ||Delta_h f||_{U^{s-1}}^{2^{s-1}}.

        Args:
            f: Signal
            s: Degree, at least 1

        Returns:
            int for exact-integer signals, otherwise a nonnegative float

        Raises:
            ParameterError: If s < 1
            InfeasibleError: If the recursion exceeds the operation budget
        """
        if s < 1:
            raise ParameterError(f"U^s norms need s >= 1, got s={s}")
        if f.is_zero:
            return 0 if f.exact_integer else 0.0
        if s >= 3:
            guard_u_norm(f.width, s)
        logger.debug(f"u_norm_pow: s={s}, width={f.width}, exact={f.exact_integer}")
        return _u_pow(f.values, s, f.exact_integer, parallel=s >= 3)

    @staticmethod
    def u_norm_local_pow(f: Signal, s: int, u: int, q: int):
        """||f 1_{u+qZ}||_{U^s}^{2^s}, evaluated on the subsampled signal."""
        if not 1 <= u <= q:
            raise ParameterError(f"localized norms need 1 <= u <= q, got u={u}, q={q}")
        return GowersService.u_norm_pow(SignalService.subsample(f, u, q), s)

    @staticmethod
    def u_norm_brute_pow(f: Signal, s: int):
        """Literal 2^s-fold enumeration; only for small widths."""
        if s < 1:
            raise ParameterError(f"U^s norms need s >= 1, got s={s}")
        if f.is_zero:
            return 0
        width = f.width
        omegas = list(itertools.product((0, 1), repeat=s))
        total = 0
        for hs in itertools.product(range(-(width - 1), width), repeat=s):
            for x in range(f.lo, f.hi + 1):
                term = 1
                for omega in omegas:
                    value = f.at(x + sum(w * h for w, h in zip(omega, hs)))
                    if sum(omega) % 2:
                        value = np.conj(value)
                    term = term * value
                    if term == 0:
                        break
                total += term
        if f.exact_integer:
            return int(total)
        return float(np.real(total))

    @staticmethod
    def additive_quadruples(elements: Sequence[int]) -> int:
        """#{(a, b, c, d) in A^4 : a + b = c + d}, the integer value of ||1_A||_{U^2}^4."""
        points = np.unique(np.asarray(list(elements), dtype=np.int64))
        if points.size == 0:
            return 0
        sums = np.add.outer(points, points).ravel() - 2 * points[0]
        counts = np.bincount(sums)
        return int(np.dot(counts, counts))

    @staticmethod
    def box_norm_pow(f: Signal, spec: BoxSpec):
        """
        ||f||_{box(Q_1..Q_d)}^{2^d} by peeling one direction at a time.

        Uses sum_t r_{Q_d}(t) * box(Delta_t f; Q_1..Q_{d-1}) where r_Q(t)
        counts pairs (h, h') in Q^2 with h - h' = t, and the base case
        sum_x |sum_{h in Q_1} f(x + h)|^2.

        Raises:
            ParameterError: If ``spec`` has no directions
        """
        if not spec.directions:
            raise ParameterError("box norms need at least one direction")
        sets = [d.as_array() for d in spec.directions]
        if f.is_zero:
            return 0 if f.exact_integer else 0.0
        return _box_pow(f.values, sets, f.exact_integer)

    @staticmethod
    def box_norm_brute_pow(f: Signal, spec: BoxSpec):
        """Literal expansion over every (h_i, h_i') pair; small inputs only."""
        if not spec.directions:
            raise ParameterError("box norms need at least one direction")
        sets = [d.as_array() for d in spec.directions]
        pairs = [list(itertools.product(q.tolist(), repeat=2)) for q in sets]
        total = 0
        for choice in itertools.product(*pairs):
            g = f
            for h, hp in choice:
                g = SignalService.asym_derivative(g, h, hp)
            total += g.values.sum() if not g.is_zero else 0
        if f.exact_integer:
            return int(total)
        return complex(total)

    @staticmethod
    def gowers_inner(fs: Sequence[Signal], s: int):
        """
        Gowers inner product of 2^s signals indexed by omega in {0,1}^s.

        Signals are ordered as ``itertools.product((0, 1), repeat=s)``; the
        one at omega is conjugated when |omega| is odd.

        Raises:
            ParameterError: Unless exactly 2^s signals are given
        """
        if s < 1:
            raise ParameterError(f"Gowers inner products need s >= 1, got s={s}")
        if len(fs) != 2**s:
            raise ParameterError(f"expected {2**s} signals for s={s}, got {len(fs)}")
        exact = all(f.exact_integer for f in fs)
        value = GowersService._inner(list(fs), s)
        if exact:
            return int(np.real(value))
        return complex(value)

    @staticmethod
    def _inner(fs: list[Signal], s: int):
        if any(f.is_zero for f in fs):
            return 0
        if s == 1:
            return fs[0].values.sum() * np.conj(fs[1].values.sum())
        evens, odds = fs[0::2], fs[1::2]
        h_lo = min(f1.lo - f0.hi for f0, f1 in zip(evens, odds))
        h_hi = max(f1.hi - f0.lo for f0, f1 in zip(evens, odds))
        if s == 2:
            first = _cross_correlation(fs[0], fs[1], h_lo, h_hi)
            second = _cross_correlation(fs[2], fs[3], h_lo, h_hi)
            return np.sum(first * np.conj(second))
        terms = []
        for h in range(h_lo, h_hi + 1):
            gs = [SignalService.multiply(f0, SignalService.conjugate(SignalService.shift(f1, h)))
                  for f0, f1 in zip(evens, odds)]
            terms.append(GowersService._inner(gs, s - 1))
        return tree_sum(terms)

    @staticmethod
    def gcs_check(fs: Sequence[Signal], s: int) -> InequalityReport:
        """|[f_omega]_{U^s}| against the product of the U^s norms."""
        lhs = abs(GowersService.gowers_inner(fs, s))
        rhs = 1.0
        for f in fs:
            rhs *= float(GowersService.u_norm_pow(f, s)) ** (1.0 / 2**s)
        holds = lhs <= rhs * (1 + settings.INEQUALITY_SLACK)
        return InequalityReport(lhs=float(lhs), rhs=float(rhs), holds=holds)

    @staticmethod
    def u2_inverse(f: Signal, grid_factor: int | None = None) -> Frequency:
        """
        Frequency beta maximizing |sum_x f(x) e(beta x)|.

        Scans the grid j / (grid_factor * width), keeps the first maximum,
        then ternary-refines within one grid step on each side. The refined
        point replaces the grid point only if it is strictly better, so the
        returned correlation is never below the grid maximum.

        Args:
            f: Nonzero signal
            grid_factor: Oversampling factor, at least 4

        Returns:
            Frequency with beta in [0, 1)

        Raises:
            ParameterError: For the zero signal or grid_factor < 4
        """
        grid_factor = grid_factor or settings.DEFAULT_GRID_FACTOR
        if f.is_zero:
            raise ParameterError("u2_inverse needs a nonzero signal")
        if grid_factor < 4:
            raise ParameterError(f"grid_factor must be at least 4, got {grid_factor}")
        values = f.as_complex()
        length = grid_factor * f.width
        magnitudes = np.abs(grid_sums(values, length))
        j = int(np.argmax(magnitudes))
        best_beta, best = j / length, float(magnitudes[j])

        n = np.arange(f.width, dtype=np.float64)

        def magnitude(beta: float) -> float:
            return abs(exponential_sum(values, n, beta))

        refined, refined_value = ternary_max(
            magnitude, best_beta - 1.0 / length, best_beta + 1.0 / length, settings.TERNARY_TOLERANCE
        )
        if refined_value > best:
            best_beta, best = refined, refined_value
        beta = best_beta % 1.0
        if beta >= 1.0:
            beta = 0.0
        return Frequency(beta=beta, correlation=best)


def _difference_counts(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct differences h - h' over Q^2 with their multiplicities."""
    diffs = np.subtract.outer(points, points).ravel()
    return np.unique(diffs, return_counts=True)


def u_norm_root(power, s: int) -> float:
    return float(power) ** (1.0 / 2**s) if power > 0 else 0.0


def _cross_correlation(f: Signal, g: Signal, lo: int, hi: int) -> np.ndarray:
    """C(h) = sum_x f(x) conj g(x + h) for h in [lo, hi]."""
    out = np.zeros(hi - lo + 1, dtype=np.result_type(f.values, g.values))
    full = np.convolve(f.values, np.conj(g.values)[::-1])[::-1]
    start = g.lo - f.hi
    a, b = max(lo, start), min(hi, start + full.size - 1)
    if a <= b:
        out[a - lo:b - lo + 1] = full[a - start:b - start + 1]
    return out
