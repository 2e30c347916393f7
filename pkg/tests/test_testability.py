import math

import numpy as np
import pytest

from wylight.errors import Exhausted
from wylight.exact_test import LOG_TOL, TWO_TAILED, psi_table
from wylight.testability import (
    distinct_thresholds, init_state, is_testable, iter_states, sigma_for_delta,
    update_threshold)
from wylight.testability import testable_mask as region_mask
from wylight.oracle import exact_psi


def all_pairs(max_N):
    for N in range(2, max_N + 1):
        for n in range(1, N // 2 + 1):
            yield n, N


class TestInitState:
    def test_standard(self):
        s = init_state(psi_table(10, 50))
        assert (s.k, s.sigma_l, s.sigma_u, s.flag) == (1, 1, 25, 1)
        assert s.delta_k == pytest.approx(0.2, rel=1e-12)

    def test_small_balanced(self):
        s = init_state(psi_table(2, 6))
        assert (s.k, s.sigma_l, s.sigma_u, s.flag) == (1, 1, 3, 1)
        assert s.delta_k == pytest.approx(1 / 3, rel=1e-12)

    def test_smallest(self):
        s = init_state(psi_table(1, 2))
        assert (s.k, s.sigma_l, s.sigma_u, s.flag) == (1, 1, 1, 1)
        assert s.delta_k == pytest.approx(0.5, rel=1e-12)

    def test_right_end_dominates_for_tiny_minor_class(self):
        # psi(2) = 1/2 > psi(1) = 1/4: the first threshold is the larger value
        s = init_state(psi_table(1, 4))
        assert s.delta_k == pytest.approx(0.5, rel=1e-12)
        assert s.flag == 0


class TestUpdateThreshold:
    def test_small_balanced_sequence(self):
        s1 = init_state(psi_table(2, 6))
        s2 = update_threshold(s1)
        assert (s2.k, s2.sigma_l, s2.sigma_u, s2.flag) == (2, 2, 3, 0)
        assert s2.delta_k == pytest.approx(1 / 5, rel=1e-12)
        s3 = update_threshold(s2)
        assert (s3.k, s3.sigma_l, s3.sigma_u, s3.flag) == (3, 2, 2, 1)
        assert s3.delta_k == pytest.approx(1 / 15, rel=1e-12)
        with pytest.raises(Exhausted):
            update_threshold(s3)

    def test_smallest_exhausts_immediately(self):
        with pytest.raises(Exhausted):
            update_threshold(init_state(psi_table(1, 2)))

    def test_cross_branch_tie_moves_both_ends(self):
        # psi(1) == psi(5) == 2/11 for n=2, N=11
        psi = psi_table(2, 11)
        assert psi.log(1) == pytest.approx(psi.log(5), abs=LOG_TOL)
        states = list(iter_states(psi))
        deltas = [s.delta_k for s in states]
        assert all(a > b for a, b in zip(deltas, deltas[1:]))
        assert (states[1].sigma_l, states[1].sigma_u) == (2, 4)

    @pytest.mark.parametrize("mode", ["one-tailed", TWO_TAILED])
    def test_sequence_equals_distinct_thresholds(self, mode):
        for n, N in all_pairs(100):
            psi = psi_table(n, N, mode)
            got = [s.log_delta for s in iter_states(psi)]
            want = [math.log(d) for d in distinct_thresholds(psi)]
            assert len(got) == len(want), (n, N)
            np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_state_invariants(self):
        for n, N in all_pairs(60):
            psi = psi_table(n, N)
            prev = None
            for s in iter_states(psi):
                assert 1 <= s.sigma_l <= s.sigma_u <= N // 2
                lv = psi.log_values
                assert s.log_delta == max(lv[s.sigma_l], lv[s.sigma_u])
                if prev is not None:
                    assert s.log_delta < prev.log_delta
                prev = s


class TestRegions:
    def test_membership_example(self):
        s = init_state(psi_table(2, 6))
        s = update_threshold(s)  # sigma_l=2, sigma_u=3
        assert is_testable(3, s, 6)
        assert [x for x in range(7) if is_testable(x, s, 6)] == [2, 3, 4]

    def test_zero_and_full_support_never_testable(self):
        for n, N in all_pairs(30):
            for s in iter_states(psi_table(n, N)):
                assert not is_testable(0, s, N)
                assert not is_testable(N, s, N)

    def test_type_two_region_is_one_interval(self):
        for N in (9, 10):
            s = init_state(psi_table(4, N))
            assert [x for x in range(N + 1) if is_testable(x, s)] == list(range(1, N))

    def test_exhaustive_equivalence_nesting_symmetry(self):
        bad = 0
        for n, N in all_pairs(100):
            psi = psi_table(n, N)
            lv = psi.log_values
            prev = None
            for s in iter_states(psi):
                mask = region_mask(s, N)
                want = lv <= s.log_delta + LOG_TOL
                want[0] = want[N] = False
                bad += int(np.any(mask != want))
                bad += int(np.any(mask != mask[::-1]))
                if prev is not None:
                    bad += int(np.any(mask & ~prev))
                prev = mask
                assert all(is_testable(x, s, N) == mask[x] for x in (0, s.sigma_l, s.sigma_u, N - s.sigma_l))
        assert bad == 0


class TestDistinctThresholds:
    def test_small_balanced(self):
        np.testing.assert_allclose(distinct_thresholds(psi_table(2, 6)), [1 / 3, 1 / 5, 1 / 15], rtol=1e-12)

    def test_smallest(self):
        np.testing.assert_allclose(distinct_thresholds(psi_table(1, 2)), [0.5], rtol=1e-12)

    def test_first_is_class_ratio_when_left_end_dominates(self):
        for n, N in all_pairs(60):
            psi = psi_table(n, N)
            first = distinct_thresholds(psi)[0]
            if psi[1] >= psi[N // 2]:
                assert first == pytest.approx(n / N, rel=1e-12)
            else:
                assert first == pytest.approx(psi[N // 2], rel=1e-12)

    def test_matches_rational_dedup(self):
        for n, N in [(2, 6), (2, 11), (3, 13), (5, 16)]:
            vals = {exact_psi(x, n, N) for x in range(1, N)}
            want = sorted((float(v) for v in vals), reverse=True)
            np.testing.assert_allclose(distinct_thresholds(psi_table(n, N)), want, rtol=1e-12)


class TestSigmaForDelta:
    def test_smallest_support_reaching_threshold(self):
        psi = psi_table(2, 6)
        assert sigma_for_delta(psi, math.log(1 / 5)) == 2
        assert sigma_for_delta(psi, math.log(1 / 3)) == 1
        assert sigma_for_delta(psi, math.log(1e-9)) is None
