"""
Tests for phase tables, cubes, major-arc denominators, the derivative
correlation inequality and the degree-lowering pipeline.
"""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exceptions import ParameterError
from models.phase_table import PhaseTable
from models.signal import Signal
from schemas.norms import Frequency
from schemas.progression import ProgressionInstance
from services.degree_lowering_service import DegreeLoweringService
from services.progression_service import ProgressionService
from utils.numbers import circle_distance
from utils.prng import SplitMix64

_TOL = 1e-9


def table(m: int, phases: dict) -> PhaseTable:
    entries = {h: Frequency(beta=beta % 1.0, correlation=1.0) for h, beta in phases.items()}
    return PhaseTable(q=1, u=1, m=m, entries=entries)


class TestPhaseMap:
    def test_interval_has_zero_phases(self):
        F = Signal.interval(20)
        result = DegreeLoweringService.phase_map(F, 1, 1, 1, [(1,), (2,), (3,)])
        for h in (1, 2, 3):
            assert circle_distance(result.phi((h,))) < 1e-9
            assert result.correlation((h,)) == pytest.approx(20 - h)

    def test_quadratic_phase(self):
        theta, N = 0.1, 20
        x = np.arange(1, N + 1)
        F = Signal.from_values(1, np.exp(2j * np.pi * theta * x**2), exact=False)
        result = DegreeLoweringService.phase_map(F, 1, 1, 1, [(1,), (2,), (3,)])
        for h in (1, 2, 3):
            assert circle_distance(result.phi((h,)) + 2 * theta * h) < 1e-6
            assert result.correlation((h,)) == pytest.approx(N - h, rel=1e-6)
        assert DegreeLoweringService.check_phase_table(F, result)

    def test_vanishing_derivative(self):
        result = DegreeLoweringService.phase_map(Signal.interval(3), 1, 1, 1, [(5,)])
        assert result.phi((5,)) == 0.0
        assert result.correlation((5,)) == 0.0

    def test_recount_on_random_signal(self, rng):
        F = Signal.from_values(1, rng.bounded_complex(24), exact=False)
        hs = list(itertools.product(range(1, 4), repeat=2))
        result = DegreeLoweringService.phase_map(F, 2, 1, 2, hs)
        assert len(result) == 9
        assert DegreeLoweringService.check_phase_table(F, result)

    def test_wrong_tuple_length_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.phase_map(Signal.interval(5), 1, 1, 2, [(1,)])


class TestCubes:
    def test_square_for_single_coordinate(self):
        cubes = DegreeLoweringService.cube_set([(1,), (2,)])
        assert list(cubes.cubes()) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_single_point(self):
        assert list(DegreeLoweringService.cube_set([(1, 1)]).cubes()) == [(1, 1, 1, 1)]

    @settings(max_examples=40)
    @given(st.sets(st.tuples(st.integers(1, 5), st.integers(1, 5)), min_size=1, max_size=20))
    def test_exhaustive_count_and_lower_bound(self, H):
        cubes = DegreeLoweringService.cube_set(H)
        expected = sum(
            1 for a0, b0, a1, b1 in itertools.product(range(1, 6), repeat=4)
            if {(a0, b0), (a0, b1), (a1, b0), (a1, b1)} <= H
        )
        assert cubes.count() == expected
        assert expected >= cubes.lower_bound(5) * (1 - _TOL)

    def test_empty_set_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.cube_set([])

    def test_mixed_lengths_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.cube_set([(1,), (1, 2)])


class TestPsiCombination:
    def test_single_coordinate_difference(self):
        phi = table(1, {(1,): 0.3, (2,): 0.1})
        assert DegreeLoweringService.psi_combination(phi, (1, 2)) == pytest.approx(0.2)
        assert DegreeLoweringService.psi_combination(phi, (2, 2)) == 0.0

    def test_equal_phases_cancel(self):
        phi = table(2, {h: 0.7 for h in itertools.product((1, 2), repeat=2)})
        assert circle_distance(DegreeLoweringService.psi_combination(phi, (1, 2, 2, 1))) < 1e-12

    @settings(max_examples=30)
    @given(st.integers(0, 2**64 - 1), st.tuples(*[st.integers(1, 3)] * 4))
    def test_matches_explicit_formula(self, seed, k):
        rng = SplitMix64(seed)
        phases = {h: rng.random() for h in itertools.product(range(1, 4), repeat=2)}
        phi = table(2, phases)
        k10, k20, k11, k21 = k
        expected = (phases[(k10, k20)] - phases[(k10, k21)] - phases[(k11, k20)] + phases[(k11, k21)]) % 1.0
        assert circle_distance(DegreeLoweringService.psi_combination(phi, k) - expected) < 1e-12

    @given(st.integers(0, 2**64 - 1), st.tuples(st.integers(1, 3), st.integers(1, 3)))
    def test_diagonal_cubes_vanish(self, seed, k0):
        rng = SplitMix64(seed)
        phi = table(2, {h: rng.random() for h in itertools.product(range(1, 4), repeat=2)})
        assert circle_distance(DegreeLoweringService.psi_combination(phi, k0 + k0)) < 1e-12

    def test_missing_vertex_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.psi_combination(table(1, {(1,): 0.0}), (1, 2))

    def test_wrong_arity_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.psi_combination(table(1, {(1,): 0.0}), (1, 1, 1))


class TestCubeAverage:
    def setup_method(self):
        self.inst = ProgressionInstance(N=16)
        self.f = Signal.interval(16)
        self.H = [(h,) for h in range(1, 5)]

    def test_zero_signal(self):
        phi = table(1, {h: 0.0 for h in self.H})
        assert DegreeLoweringService.lemma63_average(Signal.zero(), self.f, self.inst, 1, 1, self.H, phi) == 0

    def test_interval_is_positive(self):
        phi = table(1, {h: 0.0 for h in self.H})
        assert DegreeLoweringService.lemma63_average(self.f, self.f, self.inst, 1, 1, self.H, phi) > 0

    def test_constant_phase_shift_invariance(self):
        F = ProgressionService.dual_function(self.f, self.f, self.inst)
        phi = DegreeLoweringService.phase_map(F, 1, 1, 1, self.H)
        base = DegreeLoweringService.lemma63_average(self.f, self.f, self.inst, 1, 1, self.H, phi)
        moved = DegreeLoweringService.lemma63_average(self.f, self.f, self.inst, 1, 1, self.H, phi.shifted(0.37))
        assert moved == pytest.approx(base, rel=1e-9)


class TestFindDenominator:
    def test_exact_rational(self):
        result = DegreeLoweringService.find_denominator(0.25, 1, 10)
        assert (result.t, result.distance) == (4, 0.0)
        assert result.a == 1

    def test_near_rational(self):
        result = DegreeLoweringService.find_denominator(0.2499, 1, 10)
        assert result.t == 4
        assert result.distance == pytest.approx(0.0004, abs=1e-12)

    def test_irrational(self):
        result = DegreeLoweringService.find_denominator(math.sqrt(2) - 1, 1, 10)
        assert result.t == 5
        assert result.distance == pytest.approx(0.0711, abs=1e-4)

    def test_target(self):
        assert DegreeLoweringService.find_denominator(0.25, 1, 3, target_eps=0.01).meets_target is False
        assert DegreeLoweringService.find_denominator(0.25, 1, 4, target_eps=0.01).meets_target

    @given(st.floats(0, 1, exclude_max=True), st.integers(1, 3), st.integers(1, 50))
    def test_reverse_scan_agrees(self, alpha, q, Tmax):
        def distance(t):
            product = q * q * t * alpha
            return abs(product - round(product))

        best = min(distance(t) for t in reversed(range(1, Tmax + 1)))
        first = next(t for t in range(1, Tmax + 1) if distance(t) == best)
        result = DegreeLoweringService.find_denominator(alpha, q, Tmax)
        assert result.t == first
        assert result.distance == pytest.approx(best, abs=1e-15)

    def test_invalid_bounds(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.find_denominator(0.3, 1, 0)


class TestDecompose:
    def test_worked_split(self):
        approx = DegreeLoweringService.decompose(0.26, 1, 4, 0.05, 4)
        assert approx.k == 0
        assert approx.theta == pytest.approx(0.8)
        assert circle_distance(approx.reconstruct() - 0.26) < 1e-12

    @given(st.integers(1, 30), st.floats(-0.99, 0.99), st.floats(1e-4, 0.2), st.integers(1, 8))
    def test_reconstruction(self, b, fraction, gamma, C):
        a = b // 3
        alpha = (a / b + fraction * gamma) % 1.0
        approx = DegreeLoweringService.decompose(alpha, a, b, gamma, C)
        assert abs(approx.k) <= C
        assert abs(approx.theta) <= 1
        assert circle_distance(approx.reconstruct() - alpha) < 1e-12

    def test_off_arc_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.decompose(0.4, 1, 4, 0.05, 4)


class TestDerivativeCorrelationBound:
    def test_interval_in_both_modes(self, interval8):
        paper = DegreeLoweringService.lemma64_check(interval8, 1, 1, [lambda h: 0.0], mode="paper")
        derived = DegreeLoweringService.lemma64_check(interval8, 1, 1, [lambda h: 0.0], mode="derived")
        assert paper.lhs == derived.lhs == 344
        assert paper.rhs == pytest.approx(math.sqrt(8) * math.sqrt(344))
        assert derived.rhs == pytest.approx(8**1.5 * math.sqrt(344))
        assert not paper.holds
        assert derived.holds

    @pytest.mark.parametrize("mode", ["paper", "derived"])
    def test_zero_signal(self, mode):
        report = DegreeLoweringService.lemma64_check(Signal.zero(), 1, 1, [lambda h: 0.0], mode=mode)
        assert report.lhs == 0
        assert report.holds

    @pytest.mark.parametrize("seed", range(100))
    def test_random_signs_single_parameter(self, seed):
        rng = SplitMix64(seed)
        f = Signal.from_values(1, rng.signs(16))
        phase = rng.random()
        assert DegreeLoweringService.lemma64_check(f, 1, 1, [lambda h: phase]).holds

    @pytest.mark.parametrize("seed", range(20))
    def test_random_signs_two_parameters(self, seed):
        rng = SplitMix64(seed)
        f = Signal.from_values(1, rng.signs(8))
        side = 15
        phi1 = np.broadcast_to(rng.block_random(side)[None, :], (side, side))
        phi2 = np.broadcast_to(rng.block_random(side)[:, None], (side, side))
        assert DegreeLoweringService.lemma64_check(f, 1, 2, [phi1, phi2]).holds

    def test_own_coordinate_dependence_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.lemma64_check(Signal.interval(4), 1, 1, [lambda h: 0.1 * h[0]])

    def test_unknown_mode_rejected(self, interval8):
        with pytest.raises(ParameterError):
            DegreeLoweringService.lemma64_check(interval8, 1, 1, [lambda h: 0.0], mode="loose")


class TestDegreeLowerReport:
    def test_interval_pipeline(self):
        N = 40
        f = Signal.interval(N)
        report = DegreeLoweringService.degree_lower_report(f, f, ProgressionInstance(N=N), gamma=0.01)
        assert report.empty_stages == []
        assert report.upper_mass > 0 and report.lower_mass > 0
        assert report.large_tuples >= 1
        assert report.cube_count == report.large_tuples**2
        assert [(row.a, row.t, row.k) for row in report.histogram] == [(0, 1, 0)]
        assert report.dominant.count == report.cube_count
        assert report.fiber_size == report.large_tuples
        assert report.fiber_mass > 0
        assert report.extended_mass >= report.fiber_mass * (1 - _TOL)

    def test_interval_at_half_threshold_keeps_no_tuple(self):
        N = 100
        f = Signal.interval(N)
        report = DegreeLoweringService.degree_lower_report(f, f, ProgressionInstance(N=N), gamma=0.5)
        assert report.threshold == pytest.approx(0.5 * N * N)
        assert report.tuples_examined == N
        assert report.large_tuples == 0
        assert report.empty_stages == ["large_tuples"]
        assert report.upper_mass > 0 and report.lower_mass > 0
        assert report.histogram == []

    def test_zero_dual_function(self):
        report = DegreeLoweringService.degree_lower_report(Signal.zero(), Signal.interval(20), ProgressionInstance(N=20))
        assert report.empty_stages == ["dual"]
        assert report.upper_mass == report.lower_mass == report.fiber_mass == 0

    def test_random_signs_completes(self):
        N = 30
        rng = SplitMix64(12)
        f = Signal.from_values(1, rng.signs(N))
        report = DegreeLoweringService.degree_lower_report(f, f, ProgressionInstance(N=N), gamma=0.05)
        assert report.upper_ratio >= 0 and report.lower_ratio >= 0
        assert report.tuples_examined == N

    def test_unsupported_degree_rejected(self):
        with pytest.raises(ParameterError):
            DegreeLoweringService.degree_lower_report(Signal.interval(9), Signal.interval(9), ProgressionInstance(N=9), s=6)
