"""
Tests for rescaling, the density-increment search and the iteration loop.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import subsets
from exceptions import ParameterError
from schemas.progression import ProgressionInstance
from services.increment_service import IncrementService, best_window, nprime_grid
from services.progression_service import ProgressionService


class TestRescale:
    def test_even_numbers(self):
        evens = list(range(2, 21, 2))
        assert IncrementService.rescale_set(evens, 0, 2, 10) == list(range(1, 11))

    def test_window_is_truncated(self):
        assert IncrementService.rescale_set([3, 5, 7, 9, 11], 1, 2, 3) == [1, 2, 3]

    @given(subsets(60), st.integers(-5, 10), st.integers(1, 6), st.integers(1, 10))
    def test_membership_definition(self, A, a, step, Nprime):
        rescaled = IncrementService.rescale_set(A, a, step, Nprime)
        assert rescaled == [n for n in range(1, Nprime + 1) if a + step * n in set(A)]

    def test_nonpositive_step_rejected(self):
        with pytest.raises(ParameterError):
            IncrementService.rescale_set([1, 2], 0, 0, 3)


class TestWindows:
    def test_grid_doubles_then_caps(self):
        assert nprime_grid(3, 20) == [3, 6, 12, 20]
        assert nprime_grid(5, 5) == [5]

    def test_best_window_prefers_smallest_start(self):
        table = np.zeros(11, dtype=np.int64)
        table[[2, 4, 6, 7, 9]] = 1
        assert best_window(table, 2, 3) == (3, 0)

    def test_window_too_long(self):
        assert best_window(np.ones(6, dtype=np.int64), 3, 5) is None


class TestFindIncrement:
    def test_planted_progression(self):
        N = 10_000
        A = ProgressionService.planted_increment_set(N, 1, 3, 17, 90, 0.9, 0.3, 1)
        inst = ProgressionInstance(N=N)
        step = IncrementService.find_increment(A, inst, 4, 32, min(inst.M, 128))
        assert step.alpha_new >= Fraction(4, 5)
        assert step.alpha_new > step.alpha_i
        assert step.qprime == 3
        assert step.a % 3 == 17 % 3
        window = set(step.a + step.step * n for n in range(1, step.Nprime + 1))
        assert Fraction(len(window & set(A)), step.Nprime) == step.alpha_new

    def test_full_interval(self):
        step = IncrementService.find_increment(range(1, 101), ProgressionInstance(N=100), 3, 2)
        assert step.alpha_new == 1
        assert step.alpha_i == 1

    def test_periodic_set_hints_at_its_modulus(self):
        evens = list(range(2, 61, 2))
        hints = IncrementService.modulus_hints(evens, ProgressionInstance(N=60), 4)
        assert len(hints) == 1
        assert hints[0].beta == pytest.approx(0.5)
        assert hints[0].t == 2
        step = IncrementService.find_increment(evens, ProgressionInstance(N=60), 4, 2)
        assert step.alpha_new == 1
        assert step.qprime == 2

    @given(subsets(60), st.integers(1, 3), st.integers(1, 20))
    def test_single_length_matches_sliding_scan(self, A, q, Nprime):
        inst = ProgressionInstance(N=60, q=q)
        step = IncrementService.find_increment(A, inst, 1, Nprime, Nprime, with_hints=False)
        members = set(A)
        counts = {
            a: sum(a + q * n in members for n in range(1, Nprime + 1))
            for a in range(1 - q, 60 - q * Nprime + 1)
        }
        best = max(counts.values())
        assert step.Nprime == Nprime
        assert step.qprime == 1
        assert step.alpha_new == Fraction(best, Nprime)
        assert step.a == min(a for a, c in counts.items() if c == best)

    def test_balanced_zero_has_no_hints(self):
        assert IncrementService.modulus_hints(range(1, 31), ProgressionInstance(N=30), 4) == []

    @pytest.mark.parametrize(
        "qprime_max, lo, hi",
        [(0, 1, 3), (2, 4, 3), (2, 0, 3)],
    )
    def test_bad_bounds_rejected(self, qprime_max, lo, hi):
        with pytest.raises(ParameterError):
            IncrementService.find_increment([1, 2], ProgressionInstance(N=9), qprime_max, lo, hi)

    def test_set_outside_interval_rejected(self):
        with pytest.raises(ParameterError):
            IncrementService.find_increment([0, 3], ProgressionInstance(N=9), 2, 1, 3)


def assert_trace_consistent(trace, A, N):
    N_i, q_i = N, 1
    current = sorted(A)
    for i, step in enumerate(trace.steps):
        assert step.i == i
        assert (step.N_i, step.q_i) == (N_i, q_i)
        assert step.alpha_i == Fraction(len(current), N_i)
        assert step.alpha_new > step.alpha_i
        current = IncrementService.rescale_set(current, step.a, step.step, step.Nprime)
        assert Fraction(len(current), step.Nprime) == step.alpha_new
        N_i, q_i = step.Nprime, q_i * q_i * step.qprime
    assert (trace.final_N, trace.final_q) == (N_i, q_i)


class TestIterateIncrement:
    def test_greedy_set_on_nine(self):
        A = ProgressionService.greedy_free_set(ProgressionInstance(N=9))
        trace = IncrementService.iterate_increment(A, 9, floor=1)
        assert len(trace.steps) == 1
        assert trace.status == "density_capped"
        assert trace.final_alpha == 1
        assert_trace_consistent(trace, A, 9)

    def test_default_floor_stops_small_instances(self):
        trace = IncrementService.iterate_increment([1, 3, 6, 8], 9)
        assert trace.status == "N_too_small"
        assert trace.steps == []

    def test_progression_found_immediately(self):
        trace = IncrementService.iterate_increment(range(1, 10), 9, floor=1)
        assert trace.status == "progression_found"
        assert trace.witness is not None
        w = trace.witness
        assert {w.x, w.x + w.y, w.x + w.y**2} <= set(range(1, 10))

    def test_step_budget(self):
        trace = IncrementService.iterate_increment([1, 3, 6, 8], 9, max_steps=0, floor=1)
        assert trace.status == "max_steps"

    @pytest.mark.parametrize("N", [200, 400])
    def test_trace_invariants_on_free_sets(self, N):
        A = ProgressionService.greedy_free_set(ProgressionInstance(N=N))
        trace = IncrementService.iterate_increment(A, N, max_steps=5, floor=1)
        assert trace.status in ("density_capped", "progression_found", "no_increment", "max_steps", "N_too_small")
        assert_trace_consistent(trace, A, N)

    def test_deterministic(self):
        A = ProgressionService.planted_increment_set(2_000, 1, 2, 5, 40, 0.8, 0.2, 4)
        first = IncrementService.iterate_increment(A, 2_000, floor=10)
        second = IncrementService.iterate_increment(A, 2_000, floor=10)
        assert first == second
