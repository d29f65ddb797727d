"""
Tests for the b-norm, the arithmetic box inverse, gcd statistics and the
two-sided concatenation experiment.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_close, ternary_signals
from exceptions import ParameterError
from models.signal import Signal
from schemas.norms import BoxSpec
from schemas.params import Params
from services.concatenation_service import ConcatenationService
from services.gowers_service import GowersService
from services.signal_service import SignalService
from utils.prng import SplitMix64

_TOL = 1e-9
_HALF = Fraction(1, 2)


class TestBNorm:
    def test_zero_signal(self):
        assert ConcatenationService.b_norm_pow(Signal.zero(), 1, Params(N=16), _HALF, _HALF) == 0

    def test_singleton_full_scale(self):
        value = ConcatenationService.b_norm_pow(Signal.indicator([1]), 1, Params(N=16), _HALF, 1)
        assert value == pytest.approx(1.0)

    @settings(max_examples=25, deadline=None)
    @given(ternary_signals(max_width=8), st.integers(1, 3))
    def test_matches_direct_box_norm(self, f, b):
        params = Params(N=16)
        direct = [
            Fraction(GowersService.box_norm_brute_pow(f, BoxSpec.from_steps([2 * (a + b), 2 * a], 2)))
            for a in (1, 2)
        ]
        expected = float(sum(direct) / 2)
        assert_close(ConcatenationService.b_norm_pow(f, b, params, _HALF, _HALF), expected, _TOL)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**64 - 1))
    def test_nonnegative_and_homogeneous(self, seed):
        params = Params(N=36)
        f = Signal.from_values(1, SplitMix64(seed).bounded_complex(24), exact=False)
        value = ConcatenationService.b_norm_pow(f, 2, params, _HALF, _HALF)
        assert value >= -_TOL
        for c in (2, 2j):
            scaled = ConcatenationService.b_norm_pow(SignalService.scale(f, c), 2, params, _HALF, _HALF)
            assert_close(scaled, abs(c) ** 4 * value, _TOL)

    def test_nonpositive_b_rejected(self):
        with pytest.raises(ParameterError):
            ConcatenationService.b_norm_pow(Signal.interval(4), 0, Params(N=16), _HALF, _HALF)

    def test_degenerate_range_rejected(self):
        with pytest.raises(ParameterError):
            ConcatenationService.b_norm_pow(Signal.interval(4), 1, Params(N=16), Fraction(1, 8), _HALF)

    def test_sweep_flags_exceptional_rows(self):
        params = Params(N=64)
        sweep = ConcatenationService.b_norm_sweep(Signal.interval(10), params, _HALF, _HALF, Fraction(1, 3))
        assert [row.b for row in sweep.rows] == [1, 2, 3, 4]
        exceptional = set(ConcatenationService.exceptional_b_set(4, Fraction(1, 3)))
        assert [row.exceptional for row in sweep.rows] == [row.b in exceptional for row in sweep.rows]
        assert sweep.exceptional_count == len(exceptional)
        assert sweep.local_u4 == pytest.approx(float(GowersService.u_norm_pow(Signal.interval(10), 4)))


class TestGcdStatistics:
    def test_small_tail(self):
        assert ConcatenationService.gcd_tail_proportion(2, 1) == Fraction(1, 4)

    def test_threshold_above_range(self):
        assert ConcatenationService.gcd_tail_proportion(10, 10) == 0
        assert ConcatenationService.gcd_tail_proportion(10, 25) == 0

    @pytest.mark.parametrize("X", [50, 100, 200])
    @pytest.mark.parametrize("Y", [2, 5, 10])
    def test_tail_decays_like_inverse_threshold(self, X, Y):
        assert ConcatenationService.gcd_tail_proportion(X, Y) <= Fraction(2, Y)

    def test_invalid_arguments(self):
        with pytest.raises(ParameterError):
            ConcatenationService.gcd_tail_proportion(0, 3)

    @given(st.integers(1, 40), st.integers(1, 6), st.integers(1, 6))
    def test_exceptional_set_matches_definition(self, A, num, den):
        delta = Fraction(min(num, den), den)
        expected = [
            b for b in range(1, A + 1)
            if sum(1 for a in range(1, A + 1) if math.gcd(a, b) > 1 / delta) > delta * A
        ]
        assert ConcatenationService.exceptional_b_set(A, delta) == expected

    def test_empty_range(self):
        assert ConcatenationService.exceptional_b_set(0, _HALF) == []


class TestInvertArithmeticBox:
    def test_alternating_signs(self, alternating20):
        pair, report = ConcatenationService.invert_arithmetic_box_report(alternating20, 2, 1)
        assert pair.correlation >= 0.9 * alternating20.l2_squared()
        assert report.periodic
        assert report.gcd == 1
        assert np.array_equal(pair.r_window(-10, 30), pair.r_window(-8, 32))

    def test_common_factor_classes(self, alternating20):
        pair, report = ConcatenationService.invert_arithmetic_box_report(alternating20, 4, 2)
        assert report.gcd == 2
        assert len(report.classes) == 2
        assert pair.correlation >= 0.9 * alternating20.l2_squared()
        assert pair.r_period.shape == (4,)

    def test_zero_signal(self):
        pair, report = ConcatenationService.invert_arithmetic_box_report(Signal.zero(), 3, 2)
        assert pair.correlation == 0
        assert pair.l.is_zero
        assert report.exceptional_count == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**64 - 1), st.integers(1, 7), st.integers(1, 7), st.integers(1, 60))
    def test_postconditions(self, seed, c, d, width):
        f = Signal.from_values(1, SplitMix64(seed).bounded_complex(width), exact=False)
        pair, report = ConcatenationService.invert_arithmetic_box_report(f, c, d)
        assert report.periodic
        assert pair.r_period.shape == (c,)
        assert np.max(np.abs(pair.r_period)) <= 1 + 1e-12
        if not pair.l.is_zero:
            assert np.max(np.abs(pair.l.values)) <= 1 + 1e-12
        recount = abs(np.sum(f.as_complex() * pair.l.window(f.lo, f.hi) * pair.r_window(f.lo, f.hi)))
        assert pair.correlation == pytest.approx(recount, rel=1e-9, abs=1e-12)
        assert pair.correlation <= np.sum(np.abs(f.as_complex())) + 1e-9

    def test_random_three_two_reports_exceptional_count(self):
        f = Signal.from_values(1, SplitMix64(8).bounded_complex(120), exact=False)
        pair, report = ConcatenationService.invert_arithmetic_box_report(f, 3, 2)
        assert report.M == math.isqrt(120)
        assert report.exceptional_bound == pytest.approx(float(Fraction(1, 10) * report.M) * 120 / 3 + 3)
        assert 0 <= report.exceptional_count <= 120
        assert report.candidates_tried > 0

    def test_unbounded_signal_rejected(self):
        with pytest.raises(ParameterError):
            ConcatenationService.invert_arithmetic_box(Signal.from_values(1, [2.0, 0.5]), 2, 1)

    def test_small_grid_rejected(self, alternating20):
        with pytest.raises(ParameterError):
            ConcatenationService.invert_arithmetic_box(alternating20, 2, 1, grid_factor=2)


class TestBox3:
    def test_constant_ones(self):
        ones = np.ones((2, 2, 2))
        report = ConcatenationService.box3_correlation_check(ones, ones, ones, ones)
        assert report.corr == pytest.approx(1.0)
        assert report.box == pytest.approx(1.0)
        assert report.holds

    def test_equality_family(self, rng):
        n1, n2, n3 = 3, 4, 5
        a = rng.unit_complex(n2 * n3).reshape(1, n2, n3)
        b = rng.unit_complex(n1 * n3).reshape(n1, 1, n3)
        c = rng.unit_complex(n1 * n2).reshape(n1, n2, 1)
        report = ConcatenationService.box3_correlation_check(a * b * c, np.conj(a), np.conj(b), np.conj(c))
        assert report.corr == pytest.approx(1.0)
        assert report.holds

    @pytest.mark.parametrize("seed", range(100))
    def test_random_inputs(self, seed):
        rng = SplitMix64(seed)
        f = rng.bounded_complex(216).reshape(6, 6, 6)
        g1 = rng.bounded_complex(36).reshape(1, 6, 6)
        g2 = rng.bounded_complex(36).reshape(6, 1, 6)
        g3 = rng.bounded_complex(36).reshape(6, 6, 1)
        assert ConcatenationService.box3_correlation_check(f, g1, g2, g3).holds

    def test_dependent_function_rejected(self, rng):
        f = rng.bounded_complex(27).reshape(3, 3, 3)
        with pytest.raises(ParameterError):
            ConcatenationService.box3_correlation_check(f, f, np.ones((3, 1, 3)), np.ones((3, 3, 1)))


class TestConcatExperiment:
    def test_zero_signal(self):
        report = ConcatenationService.concat_experiment(Signal.zero(), Params(N=36), _HALF, _HALF, Fraction(1, 100))
        assert (report.lhs, report.rhs) == (0.0, 0.0)
        assert not report.hypothesis_holds

    def test_interval_small(self):
        report = ConcatenationService.concat_experiment(Signal.interval(36), Params(N=36), _HALF, _HALF, Fraction(1, 100))
        assert report.lhs > 0
        assert report.rhs > 0
        assert report.M == 6
        assert report.mode == "exact"

    @pytest.mark.slow
    def test_interval_against_random_signs(self):
        N = 100
        params = Params(N=N)
        interval = ConcatenationService.concat_experiment(Signal.interval(N), params, _HALF, _HALF, Fraction(1, 100))
        assert interval.lhs > 0 and interval.rhs > 0
        noisy = ConcatenationService.concat_experiment(
            Signal.from_values(1, SplitMix64(5).signs(N)), params, _HALF, _HALF, Fraction(1, 100)
        )
        assert noisy.rhs_ratio < interval.rhs_ratio
