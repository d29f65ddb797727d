"""
Concatenation service: the b-norm, the arithmetic box inverse, gcd statistics,
the three-dimensional box correlation bound and the two-sided experiment.
"""
import logging
import math
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from config import settings
from exceptions import ParameterError
from models.factor_pair import FactorPair
from models.signal import Signal
from schemas.concatenation import (
    BNormRow,
    BNormSweep,
    Box3Report,
    ClassWitness,
    ConcatReport,
    InvertBoxReport,
)
from schemas.params import Params
from services.gowers_service import GowersService
from services.signal_service import SignalService
from services.vdc_service import VdcService
from utils.dft import grid_sums_2d
from utils.feasibility import guard_u_norm
from utils.numbers import ternary_max, to_fraction
from utils.parallel import ordered_map, tree_sum

logger = logging.getLogger(__name__)

_BOUND_TOL = 1e-12


def _representation(xs: np.ndarray, c: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """The unique (y, z) with x = c y + d z and z in [c], for gcd(c, d) = 1."""
    inverse = pow(d, -1, c) if c > 1 else 0
    z = (xs * inverse) % c
    z[z == 0] = c
    y = (xs - d * z) // c
    return y, z


def _local_mean(f: Signal, s: int, q: int) -> float:
    """E_{u in [q]} ||f||_{U^s(u+qZ)}^{2^s}."""
    if f.is_zero:
        return 0.0
    guard_u_norm(-(-f.width // q), s)
    return float(tree_sum([float(GowersService.u_norm_local_pow(f, s, u, q)) for u in range(1, q + 1)])) / q


class _ClassInverse(NamedTuple):
    l: Signal
    r_period: np.ndarray
    total: complex
    witness: ClassWitness
    tried: int


def _invert_coprime(f: Signal, c: int, d: int, grid_factor: int, k: int) -> _ClassInverse:
    """
    Best factored correlation for coprime (c, d).

    Places f on the grid F[Y, Z] = f(c y + d z) with Y = y - ymin and
    Z = z - 1, scans every nonzero anchor cell against a DFT grid of
    frequencies, then refines the winning frequencies one coordinate at a time.
    """
    xs = f.positions()
    values = f.as_complex()
    y, z = _representation(xs, c, d)
    ymin, ymax = int(y.min()), int(y.max())
    ny = ymax - ymin + 1
    grid = np.zeros((ny, c), dtype=np.complex128)
    grid[y - ymin, z - 1] = values
    cells = [tuple(int(v) for v in cell) for cell in np.argwhere(grid != 0)]
    shape = (grid_factor * max(f.width, ny), grid_factor * c)

    def product(cell: tuple[int, int]) -> np.ndarray:
        Y0, Z0 = cell
        return grid * np.conj(grid[:, Z0])[:, None] * np.conj(grid[Y0, :])[None, :]

    def score(cell: tuple[int, int]) -> tuple[float, int, int]:
        sums = np.abs(grid_sums_2d(product(cell), shape))
        j, jp = np.unravel_index(int(np.argmax(sums)), shape)
        return float(sums[j, jp]) * abs(grid[cell]), int(j), int(jp)

    scores = ordered_map(score, cells)
    best = 0
    for i, entry in enumerate(scores):
        if entry[0] > scores[best][0]:
            best = i
    cell = cells[best]
    value, j, jp = scores[best]
    gamma, gamma_p = -j / shape[0], -jp / shape[1]

    G = product(cell)
    anchor = abs(grid[cell])
    rows = np.arange(ny)
    cols = np.arange(c)

    def objective(g: float, gp: float) -> float:
        return abs(np.exp(-2j * np.pi * g * rows) @ G @ np.exp(-2j * np.pi * gp * cols)) * anchor

    for _ in range(2):
        g, v = ternary_max(lambda t: objective(t, gamma_p), gamma - 1.0 / shape[0], gamma + 1.0 / shape[0],
                           settings.TERNARY_TOLERANCE)
        if v > value:
            gamma, value = g, v
        gp, v = ternary_max(lambda t: objective(gamma, t), gamma_p - 1.0 / shape[1], gamma_p + 1.0 / shape[1],
                            settings.TERNARY_TOLERANCE)
        if v > value:
            gamma_p, value = gp, v
    gamma, gamma_p = gamma % 1.0, gamma_p % 1.0

    Y0, Z0 = cell
    L = np.conj(grid[:, Z0]) * np.exp(-2j * np.pi * gamma * rows)
    R = (np.conj(grid[Y0, :]) * np.exp(-2j * np.pi * gamma_p * cols)
         * grid[Y0, Z0] * np.exp(2j * np.pi * (gamma * Y0 + gamma_p * Z0)))

    lo = c * ymin + d
    positions = np.arange(lo, c * ymax + d * c + 1, dtype=np.int64)
    ly, _ = _representation(positions, c, d)
    inside = (ly >= ymin) & (ly <= ymax)
    l_values = np.where(inside, L[np.clip(ly - ymin, 0, ny - 1)], 0)
    _, rz = _representation(np.arange(c, dtype=np.int64), c, d)
    r_period = R[rz - 1]

    l = Signal.from_values(lo, l_values, exact=False)
    total = complex(np.sum(values * l.window(f.lo, f.hi) * r_period[xs % c]))
    witness = ClassWitness(k=k, y_anchor=Y0 + ymin, z_anchor=Z0 + 1, gamma=gamma, gamma_prime=gamma_p,
                           correlation=abs(total))
    logger.debug(f"class {k}: {len(cells)} anchors, best {witness.y_anchor, witness.z_anchor}, |S|={abs(total):.6g}")
    return _ClassInverse(l, r_period, total, witness, len(cells))


class ConcatenationService:
    """Operators behind upgrading averaged box norms to a single uniformity norm."""

    @staticmethod
    def b_norm_pow(f: Signal, b: int, params: Params, delta1, delta2) -> float:
        """
        ||f||_b^4 = E_{a in [floor(delta1 M)]} sum mu mu Delta_{2q(a+b)h1, 2qah2} f.

        Args:
            f: Signal
            b: Positive shift of the first direction
            params: Supplies q and M
            delta1: Range of a
            delta2: Scale of both weights

        Returns:
            Nonnegative real value

        Raises:
            ParameterError: For b < 1 or degenerate weights
        """
        if b < 1:
            raise ParameterError(f"b must be positive, got {b}")
        M, q = params.M, params.q
        H1 = math.floor(to_fraction(delta1, "delta1") * M)
        if H1 < 1:
            raise ParameterError(f"degenerate range: floor({delta1} * {M}) = 0")
        weight = VdcService.mu(delta2, M)
        pairs = [(a,) for a in range(1, H1 + 1)]
        return VdcService.pair_average(f, pairs, lambda p: (2 * q * (p[0] + b), 2 * q * p[0]), weight)

    @staticmethod
    def exceptional_b_set(A: int, delta) -> list[int]:
        """
        b in [A] with #{a in [A] : gcd(a, b) > 1/delta} > delta * A.

        Comparisons are exact in the rational delta.
        """
        delta = to_fraction(delta, "delta")
        if A < 1:
            return []
        if not 0 < delta <= 1:
            raise ParameterError(f"delta must lie in (0, 1], got {delta}")
        r = np.arange(1, A + 1, dtype=np.int64)
        large = np.gcd.outer(r, r) * delta.numerator > delta.denominator
        counts = large.sum(axis=0)
        return [int(b) for b in r[counts * delta.denominator > delta.numerator * A]]

    @staticmethod
    def b_norm_sweep(f: Signal, params: Params, delta1, delta2, epsilon) -> BNormSweep:
        """||f||_b^4 for b in [floor(delta1 M)], flagged by exceptional-set membership."""
        M, q = params.M, params.q
        H1 = math.floor(to_fraction(delta1, "delta1") * M)
        if H1 < 1:
            raise ParameterError(f"degenerate range: floor({delta1} * {M}) = 0")
        exceptional = set(ConcatenationService.exceptional_b_set(H1, epsilon))
        rows = [
            BNormRow(b=b, value=ConcatenationService.b_norm_pow(f, b, params, delta1, delta2), exceptional=b in exceptional)
            for b in range(1, H1 + 1)
        ]
        local = _local_mean(f, 4, q)
        logger.info(f"b_norm_sweep: {H1} values of b, {len(exceptional)} exceptional")
        return BNormSweep(rows=rows, local_u4=local, exceptional_count=len(exceptional), N=params.N, q=q, M=M)

    @staticmethod
    def gcd_tail_proportion(X: int, Y: int) -> Fraction:
        """Exact #{(a, b) in [X]^2 : gcd(a, b) > Y} / X^2."""
        if X < 1 or Y < 1:
            raise ParameterError(f"X and Y must be positive, got X={X}, Y={Y}")
        r = np.arange(1, X + 1, dtype=np.int64)
        return Fraction(int(np.count_nonzero(np.gcd.outer(r, r) > Y)), X * X)

    @staticmethod
    def invert_arithmetic_box(f: Signal, c: int, d: int, delta2=Fraction(1), grid_factor: Optional[int] = None) -> FactorPair:
        pair, _ = ConcatenationService.invert_arithmetic_box_report(f, c, d, delta2, grid_factor)
        return pair

    @staticmethod
    def invert_arithmetic_box_report(
        f: Signal,
        c: int,
        d: int,
        delta2=Fraction(1),
        grid_factor: Optional[int] = None,
        M: Optional[int] = None,
        epsilon=Fraction(1, 10),
    ) -> tuple[FactorPair, InvertBoxReport]:
        """
        Constructive inverse for the box norm in directions c*[H] and d*[H].

        Writes x = c y + d z with z in [c], so l(x) = L(y) and r(x) = R(z)
        with r depending on x mod c only. When m = gcd(c, d) > 1, each class
        f_k(x') = f(m x' - k) is inverted with (c/m, d/m) and the classwise
        pairs are rotated so their correlations add in phase.

        Args:
            f: 1-bounded signal
            c, d: Positive directions
            delta2: Weight scale for the reported hypothesis value
            grid_factor: DFT oversampling, at least 4
            M: Scale for the weight and the exceptional count; isqrt(width) by default
            epsilon: Exceptional-count proportion, Z = floor(epsilon M)

        Returns:
            The FactorPair and its metrics

        Raises:
            ParameterError: For nonpositive c, d, a small grid factor or a signal that is not 1-bounded
        """
        grid_factor = grid_factor or settings.DEFAULT_GRID_FACTOR
        if c < 1 or d < 1:
            raise ParameterError(f"c and d must be positive, got c={c}, d={d}")
        if grid_factor < 4:
            raise ParameterError(f"grid_factor must be at least 4, got {grid_factor}")
        if f.sup_norm() > 1 + _BOUND_TOL:
            raise ParameterError("invert_arithmetic_box needs a 1-bounded signal")
        epsilon = to_fraction(epsilon, "epsilon")
        m = math.gcd(c, d)
        cp, dp = c // m, d // m
        M = M or max(1, math.isqrt(max(f.width, 1)))

        r_parts: list[Optional[np.ndarray]] = []
        l_parts: list[Signal] = []
        classes: list[ClassWitness] = []
        tried = 0
        for k in range(m):
            fk = SignalService.shift(SignalService.subsample(f, m - k, m), -1)
            if fk.is_zero:
                l_parts.append(Signal.zero())
                r_parts.append(None)
                classes.append(ClassWitness(k=k, correlation=0.0))
                continue
            part = _invert_coprime(fk, cp, dp, grid_factor, k)
            r_k = part.r_period
            if abs(part.total) > 0:
                r_k = r_k * np.conj(part.total) / abs(part.total)
            l_parts.append(part.l)
            r_parts.append(r_k)
            classes.append(part.witness)
            tried += part.tried

        r_period = np.zeros(c, dtype=np.complex128)
        for rho in range(c):
            k = (-rho) % m
            if r_parts[k] is not None:
                r_period[rho] = r_parts[k][((rho + k) // m) % cp]
        l = Signal.zero()
        live = [(k, lk) for k, lk in enumerate(l_parts) if not lk.is_zero]
        if live:
            lo = min(m * lk.lo - k for k, lk in live)
            hi = max(m * lk.hi - k for k, lk in live)
            dense = np.zeros(hi - lo + 1, dtype=np.complex128)
            for k, lk in live:
                dense[m * lk.positions() - k - lo] = lk.values
            l = Signal.from_values(lo, dense, exact=False)

        if f.is_zero:
            correlation = 0.0
        else:
            correlation = abs(complex(np.sum(
                f.as_complex() * l.window(f.lo, f.hi) * r_period[f.positions() % c]
            )))
        pair = FactorPair(l=l, r_period=r_period, c=c, d=d, correlation=correlation)

        Z = math.floor(epsilon * M)
        exceptional = ConcatenationService._exceptional_count(f, l, d, Z)
        bound = float(epsilon * M) * f.width / c + c
        if f.is_zero:
            hypothesis = 0.0
        else:
            hypothesis = float(VdcService.weighted_box_pow(f, [c, d], VdcService.mu(delta2, M)))
        report = InvertBoxReport(
            c=c,
            d=d,
            gcd=m,
            correlation=correlation,
            l2_mass=f.l2_squared(),
            candidates_tried=tried,
            hypothesis=hypothesis,
            M=M,
            epsilon=epsilon,
            exceptional_count=exceptional,
            exceptional_bound=bound,
            bound_holds=exceptional <= bound,
            periodic=pair.is_periodic(f.lo, f.hi) if not f.is_zero else True,
            classes=classes,
        )
        logger.info(f"invert_arithmetic_box: c={c}, d={d}, gcd={m}, correlation={correlation:.6g}, tried={tried}")
        return pair, report

    @staticmethod
    def _exceptional_count(f: Signal, l: Signal, d: int, Z: int) -> int:
        """#{x in support(f) : l(x) != l(x + d z) for some z in [Z]}."""
        if f.is_zero or Z < 1:
            return 0
        base = l.window(f.lo, f.hi)
        changed = np.zeros(f.width, dtype=bool)
        for step in range(1, Z + 1):
            moved = l.window(f.lo + d * step, f.hi + d * step)
            changed |= np.abs(moved - base) > _BOUND_TOL
        return int(np.count_nonzero(changed & (f.values != 0)))

    @staticmethod
    def box3_correlation_check(f: np.ndarray, g1: np.ndarray, g2: np.ndarray, g3: np.ndarray) -> Box3Report:
        """
        |E f g1 g2 g3| against the normalized box norm of f on X1 x X2 x X3.

        Each g_i may be given with a singleton axis i or broadcast over it; it
        must not vary along axis i.

        Raises:
            ParameterError: If a g_i depends on its own coordinate, shapes
                disagree, or an input is not 1-bounded
        """
        f = np.asarray(f, dtype=np.complex128)
        if f.ndim != 3 or 0 in f.shape:
            raise ParameterError("box3_correlation_check needs a nonempty three-dimensional f")
        gs = []
        for axis, g in enumerate((g1, g2, g3)):
            try:
                g = np.broadcast_to(np.asarray(g, dtype=np.complex128), f.shape)
            except ValueError as exc:
                raise ParameterError(f"g{axis + 1} has shape {np.shape(g)}, expected {f.shape}") from exc
            first = np.take(g, [0], axis=axis)
            if not np.array_equal(g, np.broadcast_to(first, f.shape)):
                raise ParameterError(f"g{axis + 1} depends on coordinate {axis + 1}")
            gs.append(g)
        for name, arr in (("f", f), ("g1", gs[0]), ("g2", gs[1]), ("g3", gs[2])):
            if np.max(np.abs(arr)) > 1 + _BOUND_TOL:
                raise ParameterError(f"{name} is not 1-bounded")
        corr = float(abs(np.mean(f * gs[0] * gs[1] * gs[2])))
        pairs = np.einsum("abc,dbc->adbc", f, np.conj(f))
        kernel = np.einsum("adbc,adec->adbe", pairs, np.conj(pairs))
        size = f.size
        box = float(np.sum(np.abs(kernel) ** 2)) / (size * size)
        box = box ** 0.125
        return Box3Report(corr=corr, box=box, holds=corr <= box * (1 + settings.INEQUALITY_SLACK))

    @staticmethod
    def concat_experiment(
        f: Signal,
        params: Params,
        delta1,
        delta2,
        delta3,
        mode: Optional[str] = None,
        seed: int = 0,
    ) -> ConcatReport:
        """
        Triple box average on one side, averaged local U^5 mass on the other.

        Args:
            f: Signal
            params: Supplies N, q and M
            delta1: Range of a and b
            delta2: Weight scale
            delta3: Scale of the hypothesis threshold delta3 * N * M^3
            mode: Pair averaging mode, chosen by M when None
            seed: Seed for sampled pairs

        Returns:
            ConcatReport with both sides and normalized ratios

        Raises:
            InfeasibleError: If the local U^5 evaluation exceeds the budget
        """
        delta3 = to_fraction(delta3, "delta3")
        N, q, M = params.N, params.q, params.M
        if not f.is_zero:
            guard_u_norm(-(-f.width // q), 5)
        average = VdcService.triple_box_average_report(f, params, delta1, delta2, mode=mode, seed=seed)
        rhs = _local_mean(f, 5, q)
        threshold = float(delta3 * N * M**3)
        report = ConcatReport(
            lhs=average.value,
            rhs=rhs,
            N=N,
            q=q,
            M=M,
            delta1=to_fraction(delta1, "delta1"),
            delta2=to_fraction(delta2, "delta2"),
            delta3=delta3,
            hypothesis_threshold=threshold,
            hypothesis_holds=average.value >= threshold,
            lhs_ratio=average.value / (N * M**3),
            rhs_ratio=rhs / (N / q) ** 6,
            mode=average.mode,
            pairs_evaluated=average.pairs_evaluated,
        )
        logger.info(f"concat_experiment: N={N}, q={q}, lhs={report.lhs:.6g}, rhs={report.rhs:.6g}")
        return report
