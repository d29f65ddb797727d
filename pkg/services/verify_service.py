"""
Verification suites: randomized property checks replayable from per-trial seeds.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import numpy as np

from exceptions import ParameterError
from models.signal import Signal
from schemas.params import Params
from schemas.progression import ProgressionInstance
from schemas.run import VerifyFailure, VerifyReport
from services.concatenation_service import ConcatenationService
from services.degree_lowering_service import DegreeLoweringService
from services.gowers_service import GowersService
from services.increment_service import IncrementService
from services.progression_service import ProgressionService
from services.signal_service import SignalService
from services.vdc_service import VdcService
from utils.parallel import ordered_map
from utils.prng import SplitMix64, trial_seeds

logger = logging.getLogger(__name__)

Outcome = tuple[Optional[str], Optional[float]]


class SuiteOptions(NamedTuple):
    width: int = 16
    N: Optional[int] = None
    mode: str = "derived"


class Suite(NamedTuple):
    check: Callable[[SplitMix64, SuiteOptions], Outcome]
    metric: str
    fixed: Optional[Callable[[SuiteOptions], list[str]]] = None


def _random_signal(rng: SplitMix64, width: int, offset: Optional[int] = None) -> Signal:
    n = rng.randint(1, max(1, width))
    start = rng.randint(-3, 3) if offset is None else offset
    return Signal.from_values(start, rng.bounded_complex(n), exact=False)


def _relative_gap(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _check_gcs(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    s = rng.randint(1, 3)
    fs = [_random_signal(rng, opts.width) for _ in range(2**s)]
    report = GowersService.gcs_check(fs, s)
    ratio = report.lhs / report.rhs if report.rhs else 0.0
    if not report.holds:
        return f"s={s}: |inner|={report.lhs:.17g} > {report.rhs:.17g}", ratio
    return None, ratio


def _check_vdc(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    M, H = rng.choice([(20, 3), (50, 7), (64, 16)])
    g = Signal.from_values(1, rng.bounded_complex(M), exact=False)
    report = VdcService.vdc_check(g, M, H)
    ratio = report.lhs / report.rhs if report.rhs else 0.0
    if not report.holds:
        return f"M={M}, H={H}: {report.lhs:.17g} > {report.rhs:.17g}", ratio
    return None, ratio


def _fixed_vdc(opts: SuiteOptions) -> list[str]:
    report = VdcService.vdc_check(Signal.interval(4), 4, 2)
    if (report.lhs, report.rhs) != (16.0, 21.0):
        return [f"g = 1 on [4], H = 2 gave ({report.lhs}, {report.rhs}), expected (16, 21)"]
    return []


def _check_lemma58(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    n1, n2, n3 = (rng.randint(1, min(8, max(1, opts.width))) for _ in range(3))

    def bounded(shape: tuple[int, ...]) -> np.ndarray:
        return rng.bounded_complex(int(np.prod(shape))).reshape(shape)

    f = bounded((n1, n2, n3))
    report = ConcatenationService.box3_correlation_check(
        f, bounded((1, n2, n3)), bounded((n1, 1, n3)), bounded((n1, n2, 1))
    )
    ratio = report.corr / report.box if report.box else 0.0
    if not report.holds:
        return f"shape {(n1, n2, n3)}: corr={report.corr:.17g} > box={report.box:.17g}", ratio
    return None, ratio


def _check_lemma64(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    m = rng.randint(1, 2)
    width = rng.randint(1, min(16, max(1, opts.width)))
    f = Signal.from_values(1, rng.signs(width))
    K = max(f.width, 1)
    side = 2 * K - 1
    if m == 1:
        phis = [np.full(side, rng.random())]
    else:
        first = np.broadcast_to(rng.block_random(side)[None, :], (side, side))
        second = np.broadcast_to(rng.block_random(side)[:, None], (side, side))
        phis = [first, second]
    report = DegreeLoweringService.lemma64_check(f, 1, m, phis, mode=opts.mode, K=K)
    ratio = report.lhs / report.rhs if report.rhs else 0.0
    if not report.holds:
        return f"m={m}, width={width}, mode={opts.mode}: {report.lhs:.17g} > {report.rhs:.17g}", ratio
    return None, ratio


def _fixed_lemma64(opts: SuiteOptions) -> list[str]:
    report = DegreeLoweringService.lemma64_check(Signal.interval(8), 1, 1, [lambda h: 0.0], mode=opts.mode)
    if not report.holds:
        return [f"f = 1_[8], m=1, mode={opts.mode}: {report.lhs:.17g} > {report.rhs:.17g}"]
    return []


def _check_mu(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    M = rng.randint(1, 200)
    den = rng.randint(1, 12)
    delta = Fraction(rng.randint(1, den), den)
    if math.floor(delta * M) < 1:
        delta = Fraction(1)
    weight = VdcService.mu(delta, M)
    H = weight.H
    total = sum((weight.value(int(h)) for h in weight.offsets()), Fraction(0))
    squares = sum((weight.value(int(h)) ** 2 for h in weight.offsets()), Fraction(0))
    if total != weight.mass() or weight.mass() != Fraction(H * H) / (delta * delta * M):
        return f"delta={delta}, M={M}: mass {total} != {weight.mass()}", None
    if squares != Fraction(H * (2 * H * H + 1), 3) / weight.normalizer**2 or squares != weight.l2_squared():
        return f"delta={delta}, M={M}: squared mass {squares} != {weight.l2_squared()}", None
    return None, float(weight.mass())


def _check_counting(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    N = rng.randint(1, min(128, max(1, opts.N or 128)))
    q = rng.randint(1, min(4, N))
    inst = ProgressionInstance(N=N, q=q)
    fs = [Signal.from_values(1, rng.bounded_complex(N), exact=False) for _ in range(3)]
    direct = ProgressionService.lambda_(*fs, inst)
    dual = ProgressionService.dual_inner_product(*fs, inst)
    gap = _relative_gap(direct, dual)
    if gap > 1e-9:
        return f"N={N}, q={q}: Lambda={direct} but M<F, f2>={dual}", gap
    A = Signal.indicator(rng.subset(N))
    exact = ProgressionService.lambda_(A, A, A, inst)
    if exact != ProgressionService.dual_inner_product(A, A, A, inst):
        return f"N={N}, q={q}: indicator instance differs", gap
    return None, gap


def _fixed_counting(opts: SuiteOptions) -> list[str]:
    problems = []
    for N, q, expected in ((9, 1, 13), (8, 2, 6)):
        f = Signal.interval(N)
        value = ProgressionService.lambda_(f, f, f, ProgressionInstance(N=N, q=q))
        if value != expected:
            problems.append(f"Lambda(1_[{N}]) with q={q} is {value}, expected {expected}")
    return problems


def _check_u2_oracle(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    width = min(30, max(1, opts.width))
    A = rng.subset(width)
    fast = GowersService.u_norm_pow(Signal.indicator(A), 2)
    oracle = GowersService.additive_quadruples(A)
    if fast != oracle:
        return f"A={A}: DFT gave {fast}, quadruple count {oracle}", float(len(A))
    return None, float(len(A))


def _check_boxavg(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    N = max(16, opts.width)
    params = Params(N=N, q=1)
    f = Signal.from_values(1, rng.bounded_complex(N), exact=False)
    half = Fraction(1, 2)
    scale = max(1.0, float(np.sum(np.abs(f.values)))) ** 2
    triple = VdcService.triple_box_average(f, params, half, half)
    b = rng.randint(1, max(1, params.M // 2))
    single = ConcatenationService.b_norm_pow(f, b, params, half, half)
    if triple < -1e-9 * scale or single < -1e-9 * scale:
        return f"negative average: triple={triple:.17g}, b={b}: {single:.17g}", triple / scale
    for c in (2, 1j):
        g = SignalService.scale(f, c)
        t = VdcService.triple_box_average(g, params, half, half)
        s = ConcatenationService.b_norm_pow(g, b, params, half, half)
        if _relative_gap(t, abs(c) ** 8 * triple) > 1e-9 or _relative_gap(s, abs(c) ** 4 * single) > 1e-9:
            return f"homogeneity fails at c={c}", triple / scale
    return None, triple / scale


def _check_invertbox(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    c, d = rng.randint(1, 7), rng.randint(1, 7)
    width = rng.randint(1, min(200, max(1, opts.width)))
    f = Signal.from_values(rng.randint(-5, 5), rng.bounded_complex(width), exact=False)
    pair, report = ConcatenationService.invert_arithmetic_box_report(f, c, d)
    lo, hi = f.lo - c, f.hi + c
    if not np.array_equal(pair.r_window(lo, hi), pair.r_window(lo + c, hi + c)):
        return f"c={c}, d={d}: r is not {c}-periodic", None
    if pair.l.sup_norm() > 1 + 1e-12 or np.max(np.abs(pair.r_period)) > 1 + 1e-12:
        return f"c={c}, d={d}: factors are not 1-bounded", None
    recount = 0j
    for x in range(f.lo, f.hi + 1):
        recount += f.at(x) * pair.l.at(x) * pair.r_at(x)
    gap = _relative_gap(abs(recount), pair.correlation)
    if gap > 1e-9:
        return f"c={c}, d={d}: recount {abs(recount):.17g} vs {pair.correlation:.17g}", gap
    if report.gcd == 1 and not report.bound_holds:
        return f"c={c}, d={d}: exceptional count {report.exceptional_count} over {report.exceptional_bound}", gap
    return None, pair.correlation / max(f.l2_squared(), 1e-300)


def _fixed_invertbox(opts: SuiteOptions) -> list[str]:
    f = Signal.from_values(1, [(-1) ** x for x in range(1, 21)])
    pair = ConcatenationService.invert_arithmetic_box(f, 2, 1)
    if pair.correlation < 0.9 * f.l2_squared():
        return [f"(-1)^x on [20], c=2, d=1: correlation {pair.correlation:.17g} below {0.9 * f.l2_squared()}"]
    return []


def _check_increment(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    N = opts.N or 10_000
    qprime = rng.randint(1, 4)
    Nprime = rng.randint(64, 100)
    alpha_out = 0.1 + 0.3 * rng.random()
    alpha_in = min(1.0, alpha_out + 0.4 + 0.1 * rng.random())
    a = rng.randint(1 - qprime, N - qprime * Nprime)
    A = ProgressionService.planted_increment_set(N, 1, qprime, a, Nprime, alpha_in, alpha_out, rng.next_u64())
    inst = ProgressionInstance(N=N, q=1)
    step = IncrementService.find_increment(A, inst, 4, 32, min(inst.M, 128))
    target = alpha_in - 3 * math.sqrt(alpha_in / Nprime)
    recount = len(IncrementService.rescale_set(A, step.a, step.step, step.Nprime))
    if Fraction(recount, step.Nprime) != step.alpha_new:
        return f"alpha_new {step.alpha_new} does not match recount {recount}/{step.Nprime}", None
    if float(step.alpha_new) < target:
        return (f"plant q'={qprime}, a={a}, N'={Nprime}, alpha_in={alpha_in:.4f}: "
                f"found {float(step.alpha_new):.4f} < {target:.4f}"), float(step.alpha_new) - target
    return None, float(step.alpha_new) - target


def _check_transport(rng: SplitMix64, opts: SuiteOptions) -> Outcome:
    N = rng.randint(9, max(9, opts.N or 1000))
    q = rng.randint(1, 3)
    if q > N:
        q = 1
    A = ProgressionService.greedy_free_set(ProgressionInstance(N=N, q=q))
    trace = IncrementService.iterate_increment(A, N, max_steps=5, q=q, floor=1)
    if trace.status == "progression_found":
        return f"N={N}, q={q}: a progression-free set reported a progression", None
    current, N_i, q_i, alpha = A, N, q, Fraction(len(A), N)
    for step in trace.steps:
        current = IncrementService.rescale_set(current, step.a, step.step, step.Nprime)
        if Fraction(len(current), step.Nprime) != step.alpha_new or step.alpha_new < alpha:
            return f"N={N}, q={q}: step {step.i} density {step.alpha_new} does not recount", None
        N_i, q_i, alpha = step.Nprime, step.q_next, step.alpha_new
        if q_i <= N_i and ProgressionService.enumerate_progressions(current, ProgressionInstance(N=N_i, q=q_i)):
            return f"N={N}, q={q}: step {step.i} created a progression for q={q_i}", None
    return None, float(len(trace.steps))


SUITES: dict[str, Suite] = {
    "gcs": Suite(_check_gcs, "max_lhs_over_rhs"),
    "vdc": Suite(_check_vdc, "max_lhs_over_rhs", _fixed_vdc),
    "lemma58": Suite(_check_lemma58, "max_corr_over_box"),
    "lemma64": Suite(_check_lemma64, "max_lhs_over_rhs", _fixed_lemma64),
    "mu": Suite(_check_mu, "max_mass"),
    "counting-identity": Suite(_check_counting, "max_relative_gap", _fixed_counting),
    "u2-oracle": Suite(_check_u2_oracle, "max_set_size"),
    "boxavg-positivity": Suite(_check_boxavg, "max_normalized_average"),
    "invertbox-post": Suite(_check_invertbox, "max_correlation_ratio", _fixed_invertbox),
    "increment-planted": Suite(_check_increment, "max_density_margin"),
    "rescale-transport": Suite(_check_transport, "max_steps"),
}


class VerifyService:
    """Runs a named suite for a number of seeded trials."""

    @staticmethod
    def run(suite: str, trials: int, seed: int, width: int = 16, mode: str = "derived",
            N: Optional[int] = None) -> VerifyReport:
        """
        Run ``trials`` trials of a suite plus its fixed regression instances.

        Each trial draws from SplitMix64 seeded by the recorded per-trial seed,
        so any failure replays from its seed alone.

        Args:
            suite: Suite name
            trials: Number of randomized trials
            seed: Suite seed
            width: Size parameter for random signals
            mode: Exponent mode for the lemma64 suite
            N: Length parameter for the counting and increment suites

        Returns:
            VerifyReport listing failures and summary statistics

        Raises:
            ParameterError: For an unknown suite
        """
        if suite not in SUITES:
            raise ParameterError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
        if trials < 1:
            raise ParameterError(f"trials must be positive, got {trials}")
        opts = SuiteOptions(width=width, N=N, mode=mode)
        entry = SUITES[suite]
        seeds = trial_seeds(seed, trials)
        outcomes = ordered_map(lambda s: entry.check(SplitMix64(s), opts), seeds)

        failures = []
        if entry.fixed is not None:
            failures.extend(VerifyFailure(seed=seed, diagnostic=f"fixed: {d}") for d in entry.fixed(opts))
        failures.extend(VerifyFailure(seed=s, diagnostic=d) for s, (d, _) in zip(seeds, outcomes) if d)
        metrics = [m for _, m in outcomes if m is not None]
        summary = {
            "passed": trials - sum(1 for d, _ in outcomes if d),
            entry.metric: max(metrics) if metrics else None,
        }
        if suite == "lemma64":
            summary["mode"] = mode
        logger.info(f"verify {suite}: {trials} trials, {len(failures)} failures")
        return VerifyReport(suite=suite, trials=trials, seed=seed, failures=failures, summary=summary)
