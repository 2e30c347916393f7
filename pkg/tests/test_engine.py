import math

import numpy as np
import pytest

from conftest import random_instance
import wylight.engine as engine
from wylight.engine import compute_threshold, extract_significant, final_delta
from wylight.miner import TransactionDatabase, parse_fimi
from wylight.oracle import (
    brute_force_delta, brute_force_min_pvalues, brute_force_significant)
from wylight.permutation import (
    LabelVector, MinPValues, empirical_fwer, generate_permutations, load_permutations)


class TestFinalDelta:
    def test_step_function_example(self):
        mins = [0.01, 0.03, 0.05, 0.5, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        assert final_delta(mins, 0.03, 1.0, 0.2) == pytest.approx(0.03, rel=1e-12)

    def test_nothing_below_upper_bound(self):
        assert final_delta([1.0] * 10, 0.1, 0.5, 0.05) == 0.0

    def test_all_candidates_pass(self):
        mins = [0.01, 0.02, 0.3, 0.9]
        assert final_delta(mins, 0.001, 0.1, 0.5) == pytest.approx(0.02, rel=1e-12)

    def test_upper_bound_is_strict(self):
        # 0.1 equals the bound and is excluded even though FWER(0.1) = 0.25
        assert final_delta([0.01, 0.1, 0.5, 0.9], 0.01, 0.1, 0.3) == pytest.approx(0.01)

    def test_ties_counted_together(self):
        # two samples at 0.02: FWER(0.02) = 0.5 > 0.25
        assert final_delta([0.01, 0.02, 0.02, 0.9], 0.0, 1.0, 0.25) == pytest.approx(0.01)


def planted_instance(seed=0, N=60, J=200):
    rng = np.random.default_rng(seed)
    X = rng.random((N, 6)) < 0.35
    y = (rng.random(N) < 0.4).astype(np.uint8)
    X[:, 0] |= (y == 1) & (rng.random(N) < 0.8)
    db = TransactionDatabase.from_transactions([[int(i) for i in np.flatnonzero(r)] for r in X])
    labels = LabelVector.from_sequence(y)
    return db, labels, generate_permutations(labels, J, seed=seed)


class TestComputeThreshold:
    def test_constant_item_is_uninformative(self):
        db = TransactionDatabase.from_transactions([[0]] * 12)
        y = LabelVector.from_sequence([1, 0] * 6)
        r = compute_threshold(db, y, generate_permutations(y, 30, seed=1))
        np.testing.assert_array_equal(r.min_pvalues.values, np.ones(30))
        assert r.testable_visited == 0 and r.patterns_visited == 1
        assert r.k_star == 1 and r.delta_star == 0.0
        assert r.fwer_at_delta_star == 0.0

    def test_alpha_one_returns_largest_sample(self):
        db, y, m = planted_instance(1, N=20, J=25)
        r = compute_threshold(db, y, m, alpha=1.0)
        assert r.k_star == 1
        _, log_mins = brute_force_delta(db, y, m, 1.0)
        below = [v for v in log_mins if v < -1e-9]
        assert r.delta_star == pytest.approx(math.exp(max(below)), rel=1e-12)

    def test_matches_oracle_on_tiny_instances(self, rng):
        for i in range(30):
            db, y, m = random_instance(rng)
            mode = "two-tailed" if i % 3 == 0 else "one-tailed"
            r = compute_threshold(db, y, m, 0.05, mode)
            want, _ = brute_force_delta(db, y, m, 0.05, mode)
            assert r.delta_star == want

    def test_result_contract(self, rng):
        for _ in range(30):
            db, y, m = random_instance(rng)
            r = compute_threshold(db, y, m, 0.05)
            assert 0.0 <= r.delta_star < r.delta_k_minus_1
            assert r.fwer_at_delta_star <= 0.05
            assert empirical_fwer(r.min_pvalues, r.delta_star) == r.fwer_at_delta_star
            if r.delta_k_final <= r.delta_star:
                assert empirical_fwer(r.min_pvalues, r.delta_k_final) <= 0.05
            assert (r.J, r.n, r.N, r.mode) == (m.J, y.n, db.N, "one-tailed")

    def test_exactness_boundary(self, rng):
        for _ in range(30):
            db, y, m = random_instance(rng)
            r = compute_threshold(db, y, m, 0.05)
            exact = np.array(brute_force_min_pvalues(db, y, m, exact=False))
            got = r.min_pvalues.log_values
            below = got < math.log(r.delta_k_minus_1) - 1e-10
            np.testing.assert_array_equal(got[below], exact[below])
            assert np.all(got >= exact)

    def test_testable_only_evaluation(self, rng):
        """FWER at any delta <= delta_k needs only the patterns testable at delta_k."""
        for _ in range(40):
            db, y, m = random_instance(rng)
            r = compute_threshold(db, y, m, 0.05)
            exact = MinPValues(np.array(brute_force_min_pvalues(db, y, m, exact=False)))
            for d in np.geomspace(1e-6, r.delta_k_final, 12):
                assert empirical_fwer(r.min_pvalues, d) == empirical_fwer(exact, d)

    def test_flipped_labels_are_reported(self):
        db = parse_fimi("0\n0 1\n1\n0\n1\n0 1\n")
        y = LabelVector.from_sequence([1, 1, 1, 1, 0, 0])
        r = compute_threshold(db, y, generate_permutations(y, 10, seed=0))
        assert r.flipped and r.n == 2

    def test_exhausted_maps_to_zero(self):
        # every transaction holds item 0 except one, and labels are tiny
        db = TransactionDatabase.from_transactions([[0, 1]] + [[1]] * 2 + [[0]])
        y = LabelVector.from_sequence([1, 0, 0, 0])
        m = load_permutations("1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n", y)
        r = compute_threshold(db, y, m, 0.05)
        assert r.delta_star == 0.0 and r.exhausted
        assert extract_significant(db, y, r) == []

    def test_size_mismatch(self):
        db = parse_fimi("1\n2\n1\n")
        y = LabelVector.from_sequence([1, 0, 0, 0])
        with pytest.raises(ValueError):
            compute_threshold(db, y, generate_permutations(y, 3))

    @pytest.mark.parametrize("alpha", [0.0, 1.5])
    def test_bad_alpha(self, alpha):
        db, y, m = planted_instance(2, N=12, J=5)
        with pytest.raises(ValueError):
            compute_threshold(db, y, m, alpha)


class TestTableSharing:
    def test_one_table_per_testable_pattern(self, monkeypatch):
        db, y, _ = planted_instance(3, N=80)
        calls = []
        real = engine.pvalue_table

        def counting(m, mode="one-tailed"):
            calls.append(m.x)
            return real(m, mode)

        monkeypatch.setattr(engine, "pvalue_table", counting)
        seen = {}
        for J in (10, 1000):
            calls.clear()
            r = compute_threshold(db, y, generate_permutations(y, J, seed=5), 0.05)
            seen[J] = (len(calls), r.testable_visited)
            assert len(calls) == r.testable_visited
        assert seen[10][0] > 0


class TestExtractSignificant:
    def test_zero_threshold(self):
        db = TransactionDatabase.from_transactions([[0]] * 12)
        y = LabelVector.from_sequence([1, 0] * 6)
        r = compute_threshold(db, y, generate_permutations(y, 30, seed=1))
        assert extract_significant(db, y, r) == []

    def test_planted_pattern_found(self):
        db, y, m = planted_instance(0)
        r = compute_threshold(db, y, m)
        found = extract_significant(db, y, r)
        assert found and found[0].itemset == (0,)
        assert all(p.pvalue <= r.delta_star for p in found)
        keys = [(p.log_pvalue, p.itemset) for p in found]
        assert keys == sorted(keys)

    def test_matches_oracle(self, rng):
        for _ in range(30):
            db, y, m = random_instance(rng)
            r = compute_threshold(db, y, m, 0.2)
            got = {p.itemset: p.pvalue for p in extract_significant(db, y, r)}
            want = brute_force_significant(db, y, r.delta_star)
            assert got.keys() == want.keys()
            for k in got:
                assert got[k] == want[k]

    def test_mode_mismatch_rejected(self):
        db, y, m = planted_instance(0, J=20)
        r = compute_threshold(db, y, m, mode="one-tailed")
        with pytest.raises(ValueError, match="mode"):
            extract_significant(db, y, r, mode="two-tailed")
