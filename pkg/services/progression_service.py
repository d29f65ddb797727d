"""
Progression service: the counting operator, witnesses, dual functions and fixtures.
"""
import logging
from typing import Iterable, Optional

import numpy as np

from exceptions import ParameterError
from models.signal import Signal
from schemas.progression import ProgressionInstance, ProgressionWitness
from utils.parallel import chunked_sum
from utils.prng import SplitMix64

logger = logging.getLogger(__name__)


def _membership(elements: Iterable[int], inst: ProgressionInstance) -> np.ndarray:
    """Boolean table of length N + 1 with table[n] = n in A."""
    points = np.fromiter((int(x) for x in elements), dtype=np.int64)
    if points.size and (points.min() < 1 or points.max() > inst.N):
        raise ParameterError(f"set must lie in [1, {inst.N}]")
    table = np.zeros(inst.N + 1, dtype=bool)
    table[points] = True
    return table


class ProgressionService:
    """Counting x, x+y, x+qy^2 configurations."""

    @staticmethod
    def lambda_(f0: Signal, f1: Signal, f2: Signal, inst: ProgressionInstance):
        """
        Lambda_q(f0, f1, f2) = sum_x sum_{y in [M]} f0(x) f1(x+y) f2(x+qy^2).

        Args:
            f0, f1, f2: Signals of any support
            inst: Instance fixing q and M

        Returns:
            int when all three signals are exact, otherwise complex
        """
        exact = f0.exact_integer and f1.exact_integer and f2.exact_integer
        if f0.is_zero or f1.is_zero or f2.is_zero:
            return 0 if exact else 0j
        q = inst.q

        def term(y: int):
            d = q * y * y
            lo = max(f0.lo, f1.lo - y, f2.lo - d)
            hi = min(f0.hi, f1.hi - y, f2.hi - d)
            if lo > hi:
                return 0
            total = np.sum(f0.window(lo, hi) * f1.window(lo + y, hi + y) * f2.window(lo + d, hi + d))
            return int(total) if exact else complex(total)

        value = chunked_sum(term, list(range(1, inst.M + 1)))
        logger.debug(f"lambda: N={inst.N}, q={q}, M={inst.M}, value={value}")
        return value if exact else complex(value)

    @staticmethod
    def lambda_brute(f0: Signal, f1: Signal, f2: Signal, inst: ProgressionInstance):
        """Direct double loop over x in support(f0) and y in [M]."""
        total = 0
        for x in range(f0.lo, f0.hi + 1):
            for y in range(1, inst.M + 1):
                total += f0.at(x) * f1.at(x + y) * f2.at(x + inst.q * y * y)
        return total

    @staticmethod
    def enumerate_progressions(elements: Iterable[int], inst: ProgressionInstance) -> list[ProgressionWitness]:
        """
        All (x, y) with y in [M] and {x, x+y, x+qy^2} inside A, sorted by (x, y).

        Raises:
            ParameterError: If A is not a subset of [N]
        """
        table = _membership(elements, inst)
        N, q = inst.N, inst.q
        found: list[tuple[int, int]] = []
        for y in range(1, inst.M + 1):
            d = q * y * y
            if d >= N:
                break
            count = N - d
            hits = table[1:count + 1] & table[1 + y:count + y + 1] & table[1 + d:N + 1]
            found.extend((int(x) + 1, y) for x in np.flatnonzero(hits))
        found.sort()
        return [ProgressionWitness(x=x, y=y) for x, y in found]

    @staticmethod
    def first_progression(elements: Iterable[int], inst: ProgressionInstance) -> Optional[ProgressionWitness]:
        witnesses = ProgressionService.enumerate_progressions(elements, inst)
        return witnesses[0] if witnesses else None

    @staticmethod
    def _dual_accumulator(f0: Signal, f1: Signal, inst: ProgressionInstance) -> tuple[int, np.ndarray, bool]:
        """M * F as (offset, dense values, exact)."""
        exact = f0.exact_integer and f1.exact_integer
        q, M = inst.q, inst.M
        pieces = []
        for y in range(1, M + 1):
            lo, hi = max(f0.lo, f1.lo - y), min(f0.hi, f1.hi - y)
            if lo > hi:
                continue
            product = f0.window(lo, hi) * f1.window(lo + y, hi + y)
            pieces.append((lo + q * y * y, product))
        if not pieces:
            return 0, np.zeros(0, dtype=np.int64), exact
        start = min(p[0] for p in pieces)
        stop = max(p[0] + len(p[1]) for p in pieces)
        acc = np.zeros(stop - start, dtype=np.int64 if exact else np.complex128)
        for pos, product in pieces:
            acc[pos - start:pos - start + len(product)] += product
        return start, acc, exact

    @staticmethod
    def dual_function(f0: Signal, f1: Signal, inst: ProgressionInstance) -> Signal:
        """F(x) = E_{y in [M]} f0(x - qy^2) f1(x + y - qy^2)."""
        if f0.is_zero or f1.is_zero:
            return Signal.zero()
        start, acc, _ = ProgressionService._dual_accumulator(f0, f1, inst)
        if inst.M == 1:
            return Signal.from_values(start, acc)
        return Signal.from_values(start, acc / inst.M, exact=False)

    @staticmethod
    def dual_inner_product(f0: Signal, f1: Signal, f2: Signal, inst: ProgressionInstance):
        """
        M * sum_x F(x) f2(x) with F the dual function of (f0, f1).

        Accumulates M * F directly, so the value is an exact integer for
        exact inputs and equals Lambda_q(f0, f1, f2).
        """
        if f0.is_zero or f1.is_zero or f2.is_zero:
            return 0 if f0.exact_integer and f1.exact_integer and f2.exact_integer else 0j
        start, acc, exact = ProgressionService._dual_accumulator(f0, f1, inst)
        if acc.size == 0:
            return 0 if exact and f2.exact_integer else 0j
        total = np.sum(acc * f2.window(start, start + acc.size - 1))
        if exact and f2.exact_integer:
            return int(total)
        return complex(total)

    @staticmethod
    def greedy_free_set(inst: ProgressionInstance) -> list[int]:
        """
        Scan n = 1..N and keep n whenever no configuration appears.

        Only configurations whose largest point x + qy^2 equals n can appear
        when n is added, so each step checks y in [M] with x = n - qy^2.
        """
        N, q = inst.N, inst.q
        ys = np.arange(1, inst.M + 1, dtype=np.int64)
        lifts = q * ys * ys
        table = np.zeros(N + 1, dtype=bool)
        chosen = []
        for n in range(1, N + 1):
            xs = n - lifts
            ok = xs >= 1
            if ok.any():
                xs_ok, mids = xs[ok], xs[ok] + ys[ok]
                if np.any(table[xs_ok] & ((mids == n) | table[mids])):
                    continue
            table[n] = True
            chosen.append(n)
        logger.info(f"greedy_free_set: N={N}, q={q}, kept {len(chosen)} elements")
        return chosen

    @staticmethod
    def planted_increment_set(
        N: int,
        q: int,
        qprime: int,
        a: int,
        Nprime: int,
        alpha_in: float,
        alpha_out: float,
        seed: int,
    ) -> list[int]:
        """
        Random subset of [N] that is denser on a + q*qprime*[Nprime].

        Element n is kept when the n-th SplitMix64 uniform is below the
        density of its region.

        Raises:
            ParameterError: If the progression leaves [N] or the densities are out of order
        """
        step = q * qprime
        if min(q, qprime, Nprime, N) < 1:
            raise ParameterError("N, q, qprime and Nprime must be positive")
        if a + step < 1 or a + step * Nprime > N:
            raise ParameterError(f"progression {a} + {step}*[{Nprime}] leaves [1, {N}]")
        if not 0 <= alpha_out <= alpha_in <= 1:
            raise ParameterError("densities must satisfy 0 <= alpha_out <= alpha_in <= 1")
        draws = SplitMix64(seed).block_random(N)
        density = np.full(N, float(alpha_out))
        density[a + step * np.arange(1, Nprime + 1) - 1] = float(alpha_in)
        return [int(n) for n in np.flatnonzero(draws < density) + 1]