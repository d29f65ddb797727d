"""
Increment service: density-increment search and the iteration loop.
"""
import logging
import math
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from config import settings
from exceptions import ParameterError
from models.signal import Signal
from schemas.increment import IncrementStep, IncrementTrace, ModulusHint
from schemas.progression import ProgressionInstance
from services.degree_lowering_service import DegreeLoweringService
from services.gowers_service import GowersService
from services.progression_service import ProgressionService
from utils.parallel import ordered_map

logger = logging.getLogger(__name__)


def _table(elements: Iterable[int], N: int) -> np.ndarray:
    points = np.unique(np.fromiter((int(x) for x in elements), dtype=np.int64))
    if points.size and (points[0] < 1 or points[-1] > N):
        raise ParameterError(f"set must lie in [1, {N}]")
    table = np.zeros(N + 1, dtype=np.int64)
    table[points] = 1
    return table


def _class_prefix(table: np.ndarray, step: int) -> np.ndarray:
    """P[i, r] = #{j < i : table[j * step + r] = 1}, one column per residue."""
    rows = -(-table.size // step)
    padded = np.zeros(rows * step, dtype=np.int64)
    padded[:table.size] = table
    prefix = np.zeros((rows + 1, step), dtype=np.int64)
    np.cumsum(padded.reshape(rows, step), axis=0, out=prefix[1:])
    return prefix


def best_window(
    table: np.ndarray, step: int, Nprime: int, prefix: Optional[np.ndarray] = None
) -> Optional[tuple[int, int]]:
    """
    Largest |A cap (a + step [Nprime])| over a with the window inside [N].

    Returns:
        (count, a) with the smallest a among maxima, or None if no window fits
    """
    N = table.size - 1
    last = N - step * (Nprime - 1)
    if last < 1:
        return None
    if prefix is None:
        prefix = _class_prefix(table, step)
    starts = np.arange(1, last + 1, dtype=np.int64)
    rows, cols = starts // step, starts % step
    counts = prefix[rows + Nprime, cols] - prefix[rows, cols]
    i = int(np.argmax(counts))
    return int(counts[i]), int(starts[i]) - step


def nprime_grid(lo: int, hi: int) -> list[int]:
    """lo, 2 lo, 4 lo, ... below hi, then hi."""
    grid = []
    n = lo
    while n < hi:
        grid.append(n)
        n *= 2
    grid.append(hi)
    return grid


class IncrementService:
    """Searching for denser subprogressions and iterating the search."""

    @staticmethod
    def rescale_set(A: Iterable[int], a: int, step: int, Nprime: int) -> list[int]:
        """{n in [Nprime] : a + step * n in A}, ascending."""
        if step < 1:
            raise ParameterError(f"step must be positive, got {step}")
        points = np.unique(np.fromiter((int(x) for x in A), dtype=np.int64))
        shifted = points - a
        n = shifted // step
        keep = (shifted % step == 0) & (n >= 1) & (n <= Nprime)
        return [int(v) for v in n[keep]]

    @staticmethod
    def modulus_hints(A: Iterable[int], inst: ProgressionInstance, tmax: int) -> list[ModulusHint]:
        """
        Peak frequency of 1_A - alpha 1_[N] and the denominator that best explains it.

        Empty when the balanced function vanishes.
        """
        table = _table(A, inst.N)
        alpha = table.sum() / inst.N
        balanced = Signal.from_values(1, table[1:] - alpha, exact=False)
        if balanced.is_zero or balanced.sup_norm() < 1e-12:
            return []
        peak = GowersService.u2_inverse(balanced)
        found = DegreeLoweringService.find_denominator(peak.beta, inst.q, max(1, tmax))
        return [ModulusHint(beta=peak.beta, correlation=peak.correlation, t=found.t, distance=found.distance)]

    @staticmethod
    def find_increment(
        A: Iterable[int],
        inst: ProgressionInstance,
        qprime_max: int,
        Nprime_min: int,
        Nprime_max: Optional[int] = None,
        with_hints: bool = True,
    ) -> IncrementStep:
        """
        Densest window a + q q' [N'] over q' in [qprime_max] and a geometric N' grid.

        The grid doubles from Nprime_min up to Nprime_max and is then refined
        to every N' within 25% of the best grid value. Windows are scored by
        exact density; ties go to the smallest q', then N', then a.

        Args:
            A: Subset of [N]
            inst: Instance with the current N and q
            qprime_max: Largest q'
            Nprime_min: Smallest window length
            Nprime_max: Largest window length; M by default
            with_hints: Also compute Fourier modulus hints and search hinted q' first

        Returns:
            The best IncrementStep with i = 0

        Raises:
            ParameterError: For bad bounds, a set outside [N] or an empty search space
        """
        A = list(A)
        N, q = inst.N, inst.q
        Nprime_max = inst.M if Nprime_max is None else Nprime_max
        if qprime_max < 1:
            raise ParameterError(f"qprime_max must be positive, got {qprime_max}")
        if not 1 <= Nprime_min <= Nprime_max:
            raise ParameterError(f"need 1 <= Nprime_min <= Nprime_max, got {Nprime_min}, {Nprime_max}")
        table = _table(A, N)
        alpha = Fraction(int(table.sum()), N)
        hints = IncrementService.modulus_hints(A, inst, qprime_max) if with_hints else []
        hinted = [h.t for h in hints if h.t <= qprime_max]
        order = list(dict.fromkeys(hinted + list(range(1, qprime_max + 1))))

        def search(qprime: int, lengths: list[int]):
            best = None
            prefix = _class_prefix(table, q * qprime)
            for Nprime in lengths:
                found = best_window(table, q * qprime, Nprime, prefix)
                if found is None:
                    continue
                count, a = found
                key = (-Fraction(count, Nprime), qprime, Nprime, a)
                if best is None or key < best:
                    best = key
            return best

        grid = nprime_grid(Nprime_min, Nprime_max)
        candidates = [c for c in ordered_map(lambda qp: search(qp, grid), order) if c is not None]
        if not candidates:
            raise ParameterError(f"no window a + {q}q'[N'] fits inside [{N}] for the given bounds")
        coarse = min(candidates)
        centre = coarse[2]
        refined = [n for n in range(max(Nprime_min, math.ceil(0.75 * centre)),
                                    min(Nprime_max, math.floor(1.25 * centre)) + 1)]
        candidates += [c for c in ordered_map(lambda qp: search(qp, refined), order) if c is not None]
        density, qprime, Nprime, a = min(candidates)
        step = IncrementStep(i=0, N_i=N, q_i=q, alpha_i=alpha, qprime=qprime, a=a, Nprime=Nprime,
                             alpha_new=-density, hints=hints)
        logger.info(
            f"find_increment: N={N}, q={q}, alpha={float(alpha):.4f} -> {float(step.alpha_new):.4f} "
            f"on {a} + {q * qprime}*[{Nprime}] (hinted {hinted})"
        )
        return step

    @staticmethod
    def iterate_increment(
        A: Iterable[int],
        N: int,
        max_steps: int = 10,
        qprime_max: int = 4,
        Nprime_min: Optional[int] = None,
        Nprime_max: Optional[int] = None,
        q: int = 1,
        floor: Optional[int] = None,
    ) -> IncrementTrace:
        """
        Alternate progression search and density increments.

        Each round stops with progression_found when A_i has a configuration
        for modulus q_i. Otherwise the best window a + q_i q' [N'] is taken,
        A_{i+1} = {n in [N'] : a + q_i q' n in A_i} and q_{i+1} = q_i^2 q'.
        The loop also stops below ITERATION_FLOOR, at density 1, when no
        window beats the current density, and after max_steps increments.

        Args:
            A: Subset of [N]
            N: Initial length
            max_steps: Largest number of recorded increments
            qprime_max: Largest q' per round
            Nprime_min: Smallest window length; M_i // 2 by default
            Nprime_max: Largest window length; M_i by default
            q: Initial modulus
            floor: Smallest N_i worth searching; ITERATION_FLOOR by default

        Returns:
            IncrementTrace with every recorded step
        """
        floor = settings.ITERATION_FLOOR if floor is None else floor
        current = sorted(set(int(x) for x in A))
        N_i, q_i = N, q
        steps: list[IncrementStep] = []
        witness = None
        while True:
            alpha = Fraction(len(current), N_i) if N_i else Fraction(0)
            if N_i < floor or q_i > N_i:
                status = "N_too_small"
                break
            inst = ProgressionInstance(N=N_i, q=q_i)
            witness = ProgressionService.first_progression(current, inst)
            if witness is not None:
                status = "progression_found"
                break
            if alpha == 1:
                status = "density_capped"
                break
            if len(steps) >= max_steps:
                status = "max_steps"
                break
            M = inst.M
            upper = min(M, Nprime_max) if Nprime_max else M
            lower = min(upper, Nprime_min if Nprime_min else max(1, M // 2))
            try:
                found = IncrementService.find_increment(current, inst, qprime_max, lower, upper)
            except ParameterError as exc:
                logger.warning(f"iterate_increment: search space empty at N={N_i}, q={q_i}: {exc.detail}")
                status = "no_increment"
                break
            if found.alpha_new <= alpha:
                status = "no_increment"
                break
            found = found.model_copy(update={"i": len(steps)})
            steps.append(found)
            current = IncrementService.rescale_set(current, found.a, found.step, found.Nprime)
            N_i, q_i = found.Nprime, found.q_next
            logger.info(f"iterate_increment: step {found.i} -> N={N_i}, q={q_i}, |A|={len(current)}")
        trace = IncrementTrace(N=N, steps=steps, status=status, final_N=N_i, final_q=q_i,
                               final_alpha=alpha, witness=witness)
        logger.info(f"iterate_increment: {len(steps)} steps, status {status}")
        return trace
