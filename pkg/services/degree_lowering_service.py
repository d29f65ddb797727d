"""
Degree-lowering service: phases of derivatives of dual functions, cubes,
major-arc denominators and the end-to-end pipeline.
"""
import itertools
import logging
import math
from collections import Counter
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from config import settings
from exceptions import ParameterError
from models.cube_set import CubeSet, cube_vertices
from models.phase_table import PhaseTable
from models.signal import Signal
from schemas.degree_lowering import (
    DegreeLowerReport,
    DenominatorResult,
    FiberCount,
    Lemma64Report,
    RationalApprox,
)
from schemas.norms import Frequency
from schemas.progression import ProgressionInstance
from services.gowers_service import GowersService
from services.progression_service import ProgressionService
from services.signal_service import SignalService
from utils.dft import exponential_sum
from utils.feasibility import guard
from utils.numbers import centered, circle_distance, convergents
from utils.parallel import chunked_sum, ordered_map, tree_sum

logger = logging.getLogger(__name__)

PhaseGrid = Union[Callable[[tuple[int, ...]], float], np.ndarray]

EXPONENT_MODES = ("paper", "derived")


def _derived_sample(F: Signal, q: int, u: int, h: Sequence[int]) -> Signal:
    """x -> Delta_{q h_1, ..., q h_m} T_u F(q x)."""
    return SignalService.iterated_derivative(SignalService.subsample(F, u, q), h)


def _twisted_energy(g: Signal, beta: float) -> float:
    """|sum_x g(x) e(beta x)|^2."""
    if g.is_zero:
        return 0.0
    return abs(exponential_sum(g.as_complex(), g.positions().astype(np.float64), beta)) ** 2


class DegreeLoweringService:
    """From U^s information on a dual function to U^{s-1} information."""

    @staticmethod
    def phase_map(F: Signal, q: int, u: int, m: int, hs: Sequence[tuple[int, ...]]) -> PhaseTable:
        """
        Run the U^2 inverse on every derivative x -> Delta_{qh} T_u F(qx).

        Args:
            F: Signal
            q: Modulus
            u: Residue in [q]
            m: Length of each tuple
            hs: Tuples h

        Returns:
            PhaseTable keyed by h; vanishing derivatives get beta 0 and correlation 0

        Raises:
            ParameterError: Unless 1 <= u <= q and every tuple has length m
        """
        if not 1 <= u <= q:
            raise ParameterError(f"phase_map needs 1 <= u <= q, got u={u}, q={q}")
        if m < 1:
            raise ParameterError(f"m must be positive, got {m}")
        keys = [tuple(int(v) for v in h) for h in hs]
        if any(len(h) != m for h in keys):
            raise ParameterError(f"every tuple must have length {m}")

        def invert(h: tuple[int, ...]) -> Frequency:
            g = _derived_sample(F, q, u, h)
            if g.is_zero:
                return Frequency(beta=0.0, correlation=0.0)
            return GowersService.u2_inverse(g)

        entries = dict(zip(keys, ordered_map(invert, keys)))
        logger.debug(f"phase_map: {len(entries)} tuples, q={q}, u={u}, m={m}")
        return PhaseTable(q=q, u=u, m=m, entries=entries)

    @staticmethod
    def check_phase_table(F: Signal, table: PhaseTable, rel_tol: float = 1e-9) -> bool:
        """Recompute every stored correlation at its stored phase."""
        for h, freq in table.entries.items():
            g = _derived_sample(F, table.q, table.u, h)
            recount = math.sqrt(_twisted_energy(g, freq.beta))
            if abs(recount - freq.correlation) > rel_tol * max(1.0, freq.correlation):
                return False
        return True

    @staticmethod
    def cube_set(H: Sequence[tuple[int, ...]]) -> CubeSet:
        """
        The cubes of a set of m-tuples.

        Raises:
            ParameterError: If H is empty or the tuples have different lengths
        """
        base = frozenset(tuple(int(v) for v in h) for h in H)
        if not base:
            raise ParameterError("cube_set needs a nonempty set of tuples")
        lengths = {len(h) for h in base}
        if len(lengths) != 1 or 0 in lengths:
            raise ParameterError("tuples must share one positive length")
        return CubeSet(m=lengths.pop(), base=base)

    @staticmethod
    def psi_combination(phi: PhaseTable, k: Sequence[int]) -> float:
        """
        sum_{w in {0,1}^m} (-1)^|w| phi(k_{1 w_1}, ..., k_{m w_m}) mod 1.

        Raises:
            ParameterError: If k is not a 2m-tuple or a vertex is missing
        """
        k = tuple(int(v) for v in k)
        if len(k) != 2 * phi.m:
            raise ParameterError(f"expected a {2 * phi.m}-tuple, got {len(k)} entries")
        total = 0.0
        for vertex, weight in cube_vertices(k, phi.m):
            total += -phi.phi(vertex) if weight % 2 else phi.phi(vertex)
        value = total % 1.0
        return 0.0 if value >= 1.0 else value

    @staticmethod
    def lemma63_average(
        f0: Signal,
        f1: Signal,
        inst: ProgressionInstance,
        u: int,
        m: int,
        H: Sequence[tuple[int, ...]],
        phi: PhaseTable,
    ) -> float:
        """
        Mean over cubes k of |sum_x D_k(qx) e(psi(k) x)|^2.

        D_k is the dual function of the pair Delta_{q(k_1 - k_0)} T_u f_j,
        differenced along every coordinate of k_1 - k_0.

        Raises:
            InfeasibleError: If the cube count exceeds MAX_CUBES
        """
        if f0.is_zero or f1.is_zero:
            return 0.0
        cubes = DegreeLoweringService.cube_set(H)
        if cubes.m != m:
            raise ParameterError(f"tuples have length {cubes.m}, expected m={m}")
        guard(f"{len(cubes.base)}^2 candidate cubes", float(len(cubes.base)) ** 2, settings.MAX_CUBES)
        q = inst.q
        shifted0 = SignalService.shift(f0, u)
        shifted1 = SignalService.shift(f1, u)
        ks = list(cubes.cubes())
        if not ks:
            return 0.0

        def term(k: tuple[int, ...]) -> float:
            steps = [q * (k[m + i] - k[i]) for i in range(m)]
            g0 = SignalService.iterated_derivative(shifted0, steps)
            g1 = SignalService.iterated_derivative(shifted1, steps)
            D = ProgressionService.dual_function(g0, g1, inst)
            if D.is_zero:
                return 0.0
            sampled = SignalService.sample_multiples(D, q)
            return _twisted_energy(sampled, DegreeLoweringService.psi_combination(phi, k))

        return float(chunked_sum(term, ks)) / len(ks)

    @staticmethod
    def find_denominator(alpha: float, q: int, Tmax: int, target_eps: Optional[float] = None) -> DenominatorResult:
        """
        Exhaustive argmin of ||q^2 t alpha|| over t in [Tmax]; the first minimum wins.

        Raises:
            ParameterError: If q or Tmax is not positive
        """
        if q < 1 or Tmax < 1:
            raise ParameterError(f"q and Tmax must be positive, got q={q}, Tmax={Tmax}")
        ts = np.arange(1, Tmax + 1, dtype=np.float64)
        products = q * q * ts * alpha
        distances = np.abs(products - np.rint(products))
        i = int(np.argmin(distances))
        t = i + 1
        distance = float(distances[i])
        a = int(np.rint(products[i]))
        meets = True if target_eps is None else distance <= target_eps
        hints = [qq for _, qq in convergents(float(alpha) % 1.0, Tmax) if qq >= 1]
        return DenominatorResult(alpha=float(alpha), q=q, t=t, a=a, distance=distance,
                                 target_eps=target_eps, meets_target=meets, convergents=hints)

    @staticmethod
    def decompose(alpha: float, a: int, b: int, gamma: float, C: float, t: Optional[int] = None) -> RationalApprox:
        """
        Split beta = alpha - a/b (centred mod 1) into k steps of gamma/C plus a remainder.

        k truncates toward zero, so |k| <= C and |theta| < 1.

        Raises:
            ParameterError: If b, gamma or C is not positive, or |beta| > gamma
        """
        if b < 1 or gamma <= 0 or C <= 0:
            raise ParameterError(f"need b >= 1, gamma > 0, C > 0; got b={b}, gamma={gamma}, C={C}")
        beta = centered(alpha - a / b)
        if abs(beta) > gamma * (1 + 1e-12):
            raise ParameterError(f"|alpha - a/b| = {abs(beta):.3g} exceeds gamma = {gamma:.3g}")
        step = gamma / C
        k = math.trunc(beta / step)
        theta = (beta - k * step) / step
        return RationalApprox(a=a, b=b, t=t, k=k, theta=max(-1.0, min(1.0, theta)), gamma=gamma, C=C)

    @staticmethod
    def lemma64_check(
        f: Signal,
        q: int,
        m: int,
        phis: Sequence[PhaseGrid],
        mode: str = "derived",
        K: Optional[int] = None,
    ) -> Lemma64Report:
        """
        sum_h |sum_x Delta_{qh} f(qx) e(sum_i phi_i(h) x)|^2 against K^e ||f(q .)||_{U^{m+1}}^2.

        The exponent e is m(1 - 2^-m) in "paper" mode and (m+2)(1 - 2^-m) in
        "derived" mode. Each phi_i is a callable on m-tuples or an array of
        shape (2K-1)^m indexed by h + K - 1, and may not vary in coordinate i.

        Args:
            f: Signal
            q: Modulus
            m: Number of difference parameters
            phis: m phase functions
            mode: "paper" or "derived"
            K: Length of the sampled support; the width of x -> f(qx) by default

        Raises:
            ParameterError: For an unknown mode, a wrong number of phases, or
                a phase that depends on its own coordinate
        """
        if mode not in EXPONENT_MODES:
            raise ParameterError(f"mode must be one of {EXPONENT_MODES}, got {mode!r}")
        if m < 1:
            raise ParameterError(f"m must be positive, got {m}")
        if len(phis) != m:
            raise ParameterError(f"expected {m} phase functions, got {len(phis)}")
        factor = m + 2 if mode == "derived" else m
        exponent = factor * (1 - 2.0**-m)
        g = SignalService.sample_multiples(f, q)
        K = K or max(g.width, 1)
        side = 2 * K - 1
        offsets = list(itertools.product(range(-(K - 1), K), repeat=m))

        tables = []
        for i, phi in enumerate(phis):
            if callable(phi):
                table = np.array([phi(h) for h in offsets], dtype=np.float64).reshape((side,) * m)
            else:
                table = np.asarray(phi, dtype=np.float64)
                if table.shape != (side,) * m:
                    raise ParameterError(f"phase {i + 1} has shape {table.shape}, expected {(side,) * m}")
            first = np.take(table, [0], axis=i)
            if not np.array_equal(table, np.broadcast_to(first, table.shape)):
                raise ParameterError(f"phase {i + 1} depends on coordinate {i + 1}")
            tables.append(table)

        if g.is_zero:
            return Lemma64Report(lhs=0.0, rhs=0.0, holds=True, mode=mode, exponent=exponent, K=K, m=m)
        phase = np.sum(tables, axis=0).reshape(-1)

        def term(index: int) -> float:
            return _twisted_energy(SignalService.iterated_derivative(g, offsets[index]), float(phase[index]))

        lhs = float(chunked_sum(term, list(range(len(offsets)))))
        power = float(GowersService.u_norm_pow(g, m + 1))
        rhs = float(K) ** exponent * power ** (2.0 / 2 ** (m + 1))
        holds = lhs <= rhs * (1 + settings.INEQUALITY_SLACK)
        logger.info(f"lemma64_check: m={m}, K={K}, mode={mode}, lhs={lhs:.6g}, rhs={rhs:.6g}")
        return Lemma64Report(lhs=lhs, rhs=rhs, holds=holds, mode=mode, exponent=exponent, K=K, m=m)

    @staticmethod
    def degree_lower_report(
        f0: Signal,
        f1: Signal,
        inst: ProgressionInstance,
        u: int = 1,
        s: int = 3,
        gamma: float = 0.01,
        tmax: int = 16,
        target_eps: Optional[float] = None,
        arc_width: Optional[float] = None,
        C: float = 4,
    ) -> DegreeLowerReport:
        """
        Degree-lowering pipeline on the dual function F of (f0, f1).

        Computes the local U^s and U^{s-1} masses of F, inverts every
        derivative Delta_{qh} T_u F(q .) with h in [K]^m (m = s - 2), keeps
        the tuples whose squared correlation is at least gamma K^2, forms
        their cubes, approximates each psi(k) by a major-arc rational and
        histograms the resulting (a, t, k). The densest class and its
        anchor with the largest fiber fix a phase for every h, whose
        correlation mass is reported on the fiber and on all of [K]^m.

        Args:
            f0, f1: Signals defining F
            inst: Instance fixing N and q
            u: Residue in [q]
            s: Degree, 3 to 5
            gamma: Threshold scale for the large tuples
            tmax: Largest denominator factor t
            target_eps: Target for ||q^2 t psi||; q^3/N by default
            arc_width: Major-arc half width for the decomposition; q^3/N by default
            C: Number of steps per arc half width

        Returns:
            DegreeLowerReport; empty stages are listed rather than raised

        Raises:
            ParameterError: For s outside 3..5 or u outside [q]
            InfeasibleError: If the tuple or cube count exceeds MAX_CUBES
        """
        if s not in (3, 4, 5):
            raise ParameterError(f"the pipeline supports s in 3..5, got s={s}")
        N, q = inst.N, inst.q
        if not 1 <= u <= q:
            raise ParameterError(f"u must lie in [1, {q}], got {u}")
        m, K = s - 2, N // q
        target_eps = q**3 / N if target_eps is None else target_eps
        arc_width = min(0.5, q**3 / N) if arc_width is None else arc_width
        threshold = gamma * K * K
        report = DegreeLowerReport(
            N=N, q=q, M=inst.M, K=K, u=u, s=s, m=m, gamma=gamma, threshold=threshold,
            upper_mass=0.0, upper_ratio=0.0, lower_mass=0.0, lower_ratio=0.0,
        )
        F = ProgressionService.dual_function(f0, f1, inst)
        if F.is_zero:
            report.empty_stages.append("dual")
            logger.warning("degree_lower_report: dual function vanishes")
            return report

        report.upper_mass = float(GowersService.u_norm_local_pow(F, s, u, q))
        report.lower_mass = float(GowersService.u_norm_local_pow(F, s - 1, u, q))
        report.upper_ratio = report.upper_mass / float(K) ** (s + 1)
        report.lower_ratio = report.lower_mass / float(K) ** s

        guard(f"{K}^{m} derivative tuples", float(K) ** m, settings.MAX_CUBES)
        tuples = list(itertools.product(range(1, K + 1), repeat=m))
        table = DegreeLoweringService.phase_map(F, q, u, m, tuples)
        report.tuples_examined = len(tuples)
        H = [h for h in tuples if table.correlation(h) ** 2 >= threshold]
        report.large_tuples = len(H)
        if not H:
            report.empty_stages.append("large_tuples")
            logger.warning(f"degree_lower_report: no tuple reaches {threshold:.6g}")
            return report

        guard(f"{len(H)}^2 candidate cubes", float(len(H)) ** 2, settings.MAX_CUBES)
        cubes = DegreeLoweringService.cube_set(H)
        report.cube_lower_bound = cubes.lower_bound(K)
        classes: dict[tuple[int, int, int], list[tuple[int, ...]]] = {}
        count = 0
        for k in cubes.cubes():
            count += 1
            psi = DegreeLoweringService.psi_combination(table, k)
            found = DegreeLoweringService.find_denominator(psi, q, tmax, target_eps)
            b = q * q * found.t
            try:
                approx = DegreeLoweringService.decompose(psi, found.a, b, arc_width, C, t=found.t)
            except ParameterError:
                report.off_arc_cubes += 1
                continue
            classes.setdefault((found.a % b, found.t, approx.k), []).append(k)
        report.cube_count = count
        report.histogram = [FiberCount(a=a, t=t, k=k, count=len(v)) for (a, t, k), v in sorted(classes.items())]
        if not classes:
            report.empty_stages.append("major_arc")
            logger.warning("degree_lower_report: every cube is off the major arcs")
            return report

        key = min(classes, key=lambda c: (-len(classes[c]), c))
        a, t, step = key
        report.dominant = FiberCount(a=a, t=t, k=step, count=len(classes[key]))
        anchors = Counter(k[:m] for k in classes[key])
        anchor = min(anchors, key=lambda k0: (-anchors[k0], k0))
        fiber = [k[m:] for k in classes[key] if k[:m] == anchor]
        center = (Fraction(a, q * q * t) + Fraction(step) * Fraction(arc_width) / Fraction(C)) % 1
        report.anchor = list(anchor)
        report.fiber_size = len(fiber)
        report.fiber_phase_center = float(center)

        def fiber_phase(h: tuple[int, ...]) -> float:
            rest = 0.0
            for vertex, weight in cube_vertices(anchor + h, m):
                if weight == m:
                    continue
                rest += -table.phi(vertex) if weight % 2 else table.phi(vertex)
            return ((-1) ** m * (float(center) - rest)) % 1.0

        def mass(h: tuple[int, ...]) -> float:
            return _twisted_energy(_derived_sample(F, q, u, h), fiber_phase(h))

        report.fiber_mass = float(tree_sum(ordered_map(mass, fiber)))
        report.extended_mass = float(chunked_sum(mass, tuples))
        logger.info(
            f"degree_lower_report: |H|={len(H)}, cubes={count}, classes={len(classes)}, "
            f"fiber={len(fiber)}, fiber_mass={report.fiber_mass:.6g}"
        )
        return report
