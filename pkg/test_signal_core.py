"""
Tests for signals, their operators, the PRNG and the file codecs.
"""
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bounded_signals, ternary_signals
from exceptions import MalformedInputError, ParameterError
from models.signal import Signal
from services.gowers_service import GowersService
from services.signal_service import SignalService
from utils.files import dumps, format_float, read_set, read_signal, write_set, write_signal
from utils.parallel import chunked_sum
from utils.prng import SplitMix64, trial_seeds

_TOL = 1e-12


class TestSignal:
    def test_canonical_trimming(self):
        f = Signal.from_values(-2, [0, 0, 1, -1, 0])
        assert (f.offset, f.width) == (0, 2)
        assert f == Signal.from_values(0, [1, -1])
        assert f.exact_integer

    def test_zero_signal(self):
        z = Signal.from_values(7, [0, 0, 0])
        assert z.is_zero
        assert z == Signal.zero()
        assert z.offset == 0

    def test_complex_values_are_float_path(self):
        f = Signal.from_values(1, [0.5, 1j])
        assert not f.exact_integer
        assert f.at(2) == 1j
        assert f.at(3) == 0

    def test_exact_rejects_non_ternary(self):
        with pytest.raises(ValueError):
            Signal.from_values(0, [2], exact=True)

    def test_window_pads_with_zeros(self):
        f = Signal.interval(3)
        assert f.window(-1, 5).tolist() == [0, 0, 1, 1, 1, 0, 0]

    def test_indicator_and_support(self):
        f = Signal.indicator([5, 2, 9, 2])
        assert f.support() == [2, 5, 9]


class TestShift:
    def test_identity(self):
        assert SignalService.shift(Signal.interval(3), 0) == Signal.interval(3)

    def test_unit_shift(self):
        g = SignalService.shift(Signal.interval(3), 1)
        assert g.support() == [0, 1, 2]
        assert g.exact_integer

    @given(ternary_signals())
    def test_shifts_compose(self, f):
        composed = SignalService.shift(SignalService.shift(f, 5), -7)
        assert composed == SignalService.shift(f, -2)


class TestDerivatives:
    @given(bounded_signals())
    def test_zero_step_is_squared_modulus(self, f):
        d = SignalService.mult_derivative(f, 0)
        assert np.allclose(d.window(f.lo, f.hi), np.abs(f.window(f.lo, f.hi)) ** 2, atol=_TOL)

    def test_unit_step_on_interval(self):
        assert SignalService.mult_derivative(Signal.interval(2), 1) == Signal.indicator([1])

    @given(ternary_signals())
    def test_derivatives_commute_exactly(self, f):
        a = SignalService.mult_derivative(SignalService.mult_derivative(f, 2), -3)
        b = SignalService.mult_derivative(SignalService.mult_derivative(f, -3), 2)
        assert a == b

    @given(bounded_signals())
    def test_derivatives_commute_in_floats(self, f):
        a = SignalService.iterated_derivative(f, [2, -3])
        b = SignalService.iterated_derivative(f, [-3, 2])
        lo, hi = f.lo - 5, f.hi + 5
        assert np.allclose(a.window(lo, hi), b.window(lo, hi), atol=_TOL)

    @given(ternary_signals(), st.integers(-6, 6))
    def test_support_of_derivative(self, f, h):
        d = SignalService.mult_derivative(f, h)
        support = set(f.support())
        assert set(d.support()) <= support & {x - h for x in support}

    @given(bounded_signals())
    def test_equal_shift_asym_derivative(self, f):
        d = SignalService.asym_derivative(f, 4, 4)
        lo, hi = f.lo - 6, f.hi
        expected = np.abs(f.window(lo + 4, hi + 4)) ** 2
        assert np.allclose(d.window(lo, hi), expected, atol=_TOL)

    def test_asym_derivative_on_interval(self):
        assert SignalService.asym_derivative(Signal.interval(2), 0, 1) == Signal.indicator([1])

    @given(bounded_signals(), st.integers(-4, 4), st.integers(-4, 4))
    def test_asym_derivative_conjugation(self, f, h, hp):
        a = SignalService.asym_derivative(f, h, hp)
        b = SignalService.conjugate(SignalService.asym_derivative(f, hp, h))
        lo, hi = f.lo - 5, f.hi + 5
        assert np.allclose(a.window(lo, hi), b.window(lo, hi), atol=_TOL)

    @settings(max_examples=30, deadline=None)
    @given(ternary_signals(max_width=64), st.integers(-8, 8), st.integers(-8, 8))
    def test_exact_and_float_paths_agree(self, f, h, k):
        exact = SignalService.iterated_derivative(f, [h, k])
        approx = SignalService.iterated_derivative(SignalService.to_float(f), [h, k])
        lo, hi = f.lo - 10, f.hi + 10
        assert np.allclose(exact.window(lo, hi), approx.window(lo, hi), rtol=1e-9, atol=0)
        assert float(GowersService.u_norm_pow(f, 2)) == pytest.approx(
            GowersService.u_norm_pow(SignalService.to_float(f), 2), rel=1e-9
        )


class TestSubsample:
    @given(ternary_signals())
    def test_unit_modulus_is_shift(self, f):
        assert SignalService.subsample(f, 1, 1) == SignalService.shift(f, 1)

    def test_odd_points_of_interval(self):
        g = SignalService.subsample(Signal.interval(5), 1, 2)
        assert g.support() == [0, 1, 2]

    def test_zero_signal(self):
        assert SignalService.subsample(Signal.zero(), 2, 3).is_zero

    def test_residue_out_of_range(self):
        with pytest.raises(ParameterError):
            SignalService.subsample(Signal.interval(5), 0, 2)

    @given(ternary_signals(), st.integers(1, 4))
    def test_pointwise_definition(self, f, q):
        for u in range(1, q + 1):
            g = SignalService.subsample(f, u, q)
            for x in range(-8, 8):
                assert g.at(x) == f.at(u + q * x)


class TestSplitMix64:
    def test_reference_stream(self):
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4

    def test_block_draws_match_scalar_draws(self):
        a, b = SplitMix64(99), SplitMix64(99)
        block = a.block_u64(10)
        assert [int(v) for v in block] == [b.next_u64() for _ in range(10)]
        assert a.state == b.state

    def test_random_in_unit_interval(self, rng):
        draws = rng.block_random(1000)
        assert draws.min() >= 0.0 and draws.max() < 1.0

    def test_trial_seeds_replay(self):
        assert trial_seeds(5, 3) == trial_seeds(5, 3)
        assert len(set(trial_seeds(5, 50))) == 50

    def test_bounded_complex(self, rng):
        assert np.max(np.abs(rng.bounded_complex(500))) <= 1.0


class TestParallelDeterminism:
    def test_chunked_sum_independent_of_threads(self, threads):
        values = SplitMix64(3).block_random(200)
        threads(1)
        single = chunked_sum(lambda i: values[i] * 1e-3, list(range(200)))
        threads(4)
        many = chunked_sum(lambda i: values[i] * 1e-3, list(range(200)))
        assert single == many


class TestFiles:
    def test_set_file_round_trip(self, tmp_path):
        path = tmp_path / "A.txt"
        write_set([8, 1, 3, 6], path)
        assert read_set(path) == [1, 3, 6, 8]

    def test_comments_and_blank_lines(self, set_file):
        path = set_file(["# header", "", "1", "4  # four"])
        assert read_set(path) == [1, 4]

    @pytest.mark.parametrize("lines", [["1", "x"], ["3", "2"], ["2", "2"]])
    def test_malformed_set_files(self, set_file, lines):
        with pytest.raises(MalformedInputError) as excinfo:
            read_set(set_file(lines))
        assert excinfo.value.exit_code == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(MalformedInputError):
            read_set(tmp_path / "missing.txt")

    def test_signal_json(self, tmp_path):
        f = Signal.from_values(-1, [0.5, -1j, 0.25])
        path = tmp_path / "f.json"
        write_signal(f, path)
        payload = json.loads(path.read_text())
        assert payload["offset"] == -1
        assert read_signal(path) == f

    def test_real_signal_omits_imaginary_part(self, tmp_path):
        path = tmp_path / "g.json"
        write_signal(Signal.interval(3), path)
        assert "im" not in json.loads(path.read_text())

    def test_malformed_signal_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"offset": 0, "re": [1, 2], "im": [0]}')
        with pytest.raises(MalformedInputError):
            read_signal(path)

    def test_set_path_loads_indicator(self, set_file):
        assert read_signal(set_file([2, 3])) == Signal.indicator([2, 3])

    def test_seventeen_digit_floats(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(3.0) == "3.0"
        text = dumps({"x": 1 / 3, "p": Fraction(1, 4), "z": 1 + 2j})
        payload = json.loads(text)
        assert payload["p"] == "1/4"
        assert payload["z"] == {"re": 1.0, "im": 2.0}
        assert "0.33333333333333331" in text
