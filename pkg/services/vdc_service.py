"""
Van der Corput service: triangular weights, the differencing inequality and
the triple box-norm average.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from config import settings
from exceptions import ParameterError
from models.signal import Signal
from models.weight import TriangularWeight
from schemas.base import InequalityReport
from schemas.norms import BoxAverageResult, BoxSpec
from schemas.params import Params
from services.gowers_service import GowersService
from utils.numbers import to_fraction
from utils.parallel import chunked_sum
from utils.prng import SplitMix64

logger = logging.getLogger(__name__)


class VdcService:
    """Weights and weighted box averages."""

    @staticmethod
    def mu(delta, M: int) -> TriangularWeight:
        """
        The weight mu_{delta, M}.

        Raises:
            ParameterError: If delta is outside (0, 1], M < 1 or floor(delta M) = 0
        """
        delta = to_fraction(delta, "delta")
        if not 0 < delta <= 1:
            raise ParameterError(f"delta must lie in (0, 1], got {delta}")
        if M < 1:
            raise ParameterError(f"M must be positive, got {M}")
        H = math.floor(delta * M)
        if H < 1:
            raise ParameterError(f"degenerate weight: floor({delta} * {M}) = 0")
        return TriangularWeight(delta=delta, M=M, H=H)

    @staticmethod
    def vdc_check(g: Signal, M: int, H: int) -> InequalityReport:
        """
        |sum_{y in [M]} g(y)|^2 against ((M+H)/H^2) sum_h r_[H](h) sum_y g(y+h) conj g(y).

        The inner sum runs over y with both y and y + h in [M].

        Raises:
            ParameterError: Unless 0 < H < M
        """
        if not 0 < H < M:
            raise ParameterError(f"van der Corput needs 0 < H < M, got H={H}, M={M}")
        w = g.window(1, M)
        exact = g.exact_integer
        total = w.sum()
        lhs = int(total) ** 2 if exact else abs(complex(total)) ** 2
        correlated = 0
        for h in range(-(H - 1), H):
            if h >= 0:
                c = np.sum(w[h:] * np.conj(w[:M - h]))
            else:
                c = np.sum(w[:M + h] * np.conj(w[-h:]))
            correlated += (H - abs(h)) * (int(c) if exact else complex(c))
        factor = Fraction(M + H, H * H)
        if exact:
            rhs = float(factor * correlated)
        else:
            rhs = float(factor) * complex(correlated).real
        holds = lhs <= rhs * (1 + settings.INEQUALITY_SLACK)
        return InequalityReport(lhs=float(lhs), rhs=float(rhs), holds=holds)

    @staticmethod
    def weighted_box_pow(f: Signal, steps: Sequence[int], weight: TriangularWeight):
        """
        sum_x sum_{h_1..h_d} prod_i mu(h_i) Delta_{s_1 h_1, ..., s_d h_d} f(x).

        Equals the box norm with Q_i = s_i * [H] divided by (delta^2 M)^d.

        Returns:
            Fraction for exact signals, float otherwise
        """
        raw = GowersService.box_norm_pow(f, BoxSpec.from_steps(list(steps), weight.H))
        scale = weight.normalizer ** len(steps)
        if isinstance(raw, int):
            return Fraction(raw) / scale
        return float(raw) / float(scale)

    @staticmethod
    def pair_average(
        f: Signal,
        pairs: list[tuple[int, ...]],
        steps_for: Callable[[tuple[int, ...]], Sequence[int]],
        weight: TriangularWeight,
    ) -> float:
        """Mean of ``weighted_box_pow`` over parameter tuples, reduced in a fixed order."""
        if not pairs or f.is_zero:
            return 0.0
        total = chunked_sum(lambda p: VdcService.weighted_box_pow(f, steps_for(p), weight), pairs)
        return float(total / len(pairs)) if isinstance(total, Fraction) else float(total) / len(pairs)

    @staticmethod
    def sample_pairs(H: int, M: int, mode: Optional[str], seed: int) -> tuple[list[tuple[int, int]], str]:
        """All of [H]^2 in exact mode; otherwise MONTE_CARLO_PAIRS SplitMix64 draws."""
        if mode is None:
            mode = "exact" if M < settings.EXACT_PAIR_MODE_MAX_M else "montecarlo"
        if mode not in ("exact", "montecarlo"):
            raise ParameterError(f"unknown averaging mode {mode!r}")
        if mode == "exact":
            return [(a, b) for a in range(1, H + 1) for b in range(1, H + 1)], mode
        rng = SplitMix64(seed)
        pairs = [(rng.randint(1, H), rng.randint(1, H)) for _ in range(settings.MONTE_CARLO_PAIRS)]
        logger.warning(f"Sampling {len(pairs)} of {H * H} (a, b) pairs at M={M}")
        return pairs, mode

    @staticmethod
    def triple_box_average_report(
        f: Signal,
        params: Params,
        delta2,
        delta3,
        mode: Optional[str] = None,
        seed: int = 0,
    ) -> BoxAverageResult:
        """
        E_{a,b in [floor(delta2 M)]} sum mu mu mu Delta_{2q(a+b)h1, 2qbh2, 2qah3} f.

        Args:
            f: Signal
            params: Supplies q and M
            delta2: Range of a and b
            delta3: Scale of the three weights
            mode: "exact", "montecarlo", or None to choose by M
            seed: SplitMix64 seed for sampled pairs

        Returns:
            BoxAverageResult with the value, pair count and mode

        Raises:
            ParameterError: For degenerate weights
        """
        M, q = params.M, params.q
        H2 = math.floor(to_fraction(delta2, "delta2") * M)
        if H2 < 1:
            raise ParameterError(f"degenerate range: floor({delta2} * {M}) = 0")
        weight = VdcService.mu(delta3, M)
        pairs, mode = VdcService.sample_pairs(H2, M, mode, seed)

        def steps(pair):
            a, b = pair
            return (2 * q * (a + b), 2 * q * b, 2 * q * a)

        value = VdcService.pair_average(f, pairs, steps, weight)
        logger.info(f"triple_box_average: M={M}, H2={H2}, H3={weight.H}, pairs={len(pairs)}, mode={mode}")
        return BoxAverageResult(value=value, pairs_evaluated=len(pairs), mode=mode)

    @staticmethod
    def triple_box_average(f: Signal, params: Params, delta2, delta3) -> float:
        return VdcService.triple_box_average_report(f, params, delta2, delta3).value
