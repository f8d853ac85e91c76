"""Metric definitions against hand computations and brute-force oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from ranklens.errors import DataError
from ranklens.metrics import (
    FitReport,
    fit_report,
    kendall_tau,
    mean_average_precision,
    ndcg_at_k,
    precision_at_k,
    rank_deviation,
)


from oracles import (
    oracle_average_precision,
    oracle_kendall,
    oracle_ndcg,
    oracle_precision,
)


class TestRankDeviation:
    def test_identity(self):
        assert rank_deviation([1, 2, 3], [1, 2, 3]).tolist() == [0, 0, 0]

    def test_reversal(self):
        assert rank_deviation([1, 2, 3], [3, 2, 1]).tolist() == [2, 0, 2]

    def test_state_example(self):
        truth = list(range(1, 51))
        learned = truth.copy()
        learned[33], learned[35] = learned[35], learned[33]  # ranks 34 and 36 swap
        assert rank_deviation(truth, learned)[33] == 2

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            rank_deviation([1, 2, 3], [1, 2])

    def test_symmetric(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(1, 10))
            a = rng.permutation(n) + 1
            b = rng.permutation(n) + 1
            assert rank_deviation(a, b).tolist() == rank_deviation(b, a).tolist()

    def test_total_deviation_even(self):
        # Sum of |tau_i - tau_hat_i| is even for any pair of permutations.
        for n in range(2, 8):
            base = list(range(1, n + 1))
            rng = np.random.default_rng(n)
            truth = rng.permutation(n) + 1
            for perm in itertools.permutations(base):
                assert rank_deviation(truth, list(perm)).sum() % 2 == 0


class TestNdcg:
    def test_perfect_order(self):
        assert ndcg_at_k([2, 1, 0], [0, 1, 2], 3) == 1.0

    def test_hand_computed(self):
        # Learned order by label: position 1 -> label 1, position 2 -> label 2,
        # position 3 -> label 0.
        got = ndcg_at_k([2, 1, 0], [1, 0, 2], 3)
        dcg = 1.0 + 2.0 / math.log2(3)
        idcg = 2.0 + 1.0 / math.log2(3)
        assert got == pytest.approx(dcg / idcg, abs=1e-12)
        assert got == pytest.approx(0.85971, abs=1e-5)

    def test_k_beyond_n(self):
        labels = [3, 1, 2]
        order = [2, 0, 1]
        assert ndcg_at_k(labels, order, 50) == ndcg_at_k(labels, order, 3)

    def test_all_zero_labels(self):
        assert ndcg_at_k([0, 0, 0], [2, 1, 0], 2) == 1.0

    def test_invalid_permutation(self):
        with pytest.raises(DataError, match="permutation"):
            ndcg_at_k([1, 0], [0, 0], 2)

    def test_matches_oracle_exhaustive(self):
        rng = np.random.default_rng(3)
        for n in range(1, 6):
            labels = [float(v) for v in rng.integers(0, 4, n)]
            for order in itertools.permutations(range(n)):
                for k in (1, 2, 10):
                    assert ndcg_at_k(labels, list(order), k) == pytest.approx(
                        oracle_ndcg(labels, order, k), abs=1e-12
                    )

    def test_argsort_invariance(self):
        # Any strictly increasing transform of scores leaves the metric alone.
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = int(rng.integers(2, 12))
            scores = rng.standard_normal(n)
            labels = rng.integers(0, n, n).astype(float)
            order_a = np.lexsort((np.arange(n), -scores))
            order_b = np.lexsort((np.arange(n), -(np.exp(scores) * 3 + 1)))
            assert ndcg_at_k(labels, order_a, 10) == ndcg_at_k(labels, order_b, 10)

    def test_maximal_iff_sorted_prefix(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(2, 8))
            labels = rng.integers(0, 4, n).astype(float)
            order = list(rng.permutation(n))
            k = int(rng.integers(1, n + 1))
            got = ndcg_at_k(labels, order, k)
            sorted_prefix = all(
                labels[order[i]] >= labels[order[i + 1]] for i in range(min(k, n) - 1)
            ) and (min(k, n) == n or all(
                labels[order[min(k, n) - 1]] >= labels[j]
                for j in order[min(k, n):]
            ))
            if sorted_prefix:
                assert got == pytest.approx(1.0, abs=1e-12)
            elif got == pytest.approx(1.0, abs=1e-12):
                # ties may still attain 1 without literal sortedness
                ideal = sorted(labels, reverse=True)[: min(k, n)]
                attained = [labels[i] for i in order[: min(k, n)]]
                assert sorted(attained, reverse=True) == ideal


class TestPrecision:
    def test_identity(self):
        truth = list(range(1, 21))
        assert precision_at_k(truth, truth, 10) == 1.0

    def test_disjoint_top_sets(self):
        truth = list(range(1, 21))
        learned = list(range(11, 21)) + list(range(1, 11))
        assert precision_at_k(truth, learned, 10) == 0.0

    def test_partial_overlap(self):
        truth = list(range(1, 21))
        learned = truth.copy()
        # push truth ranks 8, 9, 10 out of the learned top-10
        for a, b in ((7, 17), (8, 18), (9, 19)):
            learned[a], learned[b] = learned[b], learned[a]
        assert precision_at_k(truth, learned, 10) == pytest.approx(0.7)

    def test_k_too_large(self):
        with pytest.raises(DataError, match="exceeds"):
            precision_at_k([1, 2], [1, 2], 3)

    def test_matches_oracle_exhaustive(self):
        for n in range(2, 7):
            truth = list(range(1, n + 1))
            for perm in itertools.permutations(truth):
                for k in range(1, n + 1):
                    assert precision_at_k(truth, list(perm), k) == pytest.approx(
                        oracle_precision(truth, perm, k), abs=1e-12
                    )


class TestAveragePrecision:
    def test_identity(self):
        truth = list(range(1, 16))
        assert mean_average_precision(truth, truth) == pytest.approx(1.0)

    def test_disjoint(self):
        truth = list(range(1, 21))
        learned = list(range(11, 21)) + list(range(1, 11))
        # relevant items all sit at learned positions 11..20
        expected = sum((i + 1) / (10 + i + 1) for i in range(10)) / 10
        assert mean_average_precision(truth, learned) == pytest.approx(expected)

    def test_matches_oracle_exhaustive(self):
        for n in range(2, 7):
            truth = list(range(1, n + 1))
            for perm in itertools.permutations(truth):
                assert mean_average_precision(truth, list(perm)) == pytest.approx(
                    oracle_average_precision(truth, perm), abs=1e-12
                )


class TestKendall:
    def test_identity(self):
        assert kendall_tau([1, 2, 3], [1, 2, 3]) == 1.0

    def test_reversal(self):
        assert kendall_tau([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0

    def test_adjacent_swap(self):
        assert kendall_tau([1, 2, 3], [2, 1, 3]) == pytest.approx(1 / 3)

    def test_matches_oracle_exhaustive(self):
        for n in range(2, 7):
            truth = list(range(1, n + 1))
            for perm in itertools.permutations(truth):
                assert kendall_tau(truth, list(perm)) == pytest.approx(
                    oracle_kendall(truth, perm), abs=1e-12
                )


class TestFitReport:
    def test_zero_deviation_implies_perfect_metrics(self):
        truth = np.arange(1, 26)
        labels = 25 - truth
        report = fit_report("r", 2011, [f"c{i}" for i in range(25)], truth, truth, labels)
        assert all(d == 0 for d in report.deviations)
        assert report.ndcg_at_10 == 1.0
        assert report.precision_at_10 == 1.0
        assert report.mean_average_precision == 1.0

    def test_values_bounded(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 30))
            truth = rng.permutation(n) + 1
            learned = rng.permutation(n) + 1
            labels = n - truth
            report = fit_report("r", 1, [str(i) for i in range(n)], truth, learned, labels)
            assert 0.0 <= report.ndcg_at_10 <= 1.0
            assert 0.0 <= report.precision_at_10 <= 1.0
            assert 0.0 <= report.mean_average_precision <= 1.0
            assert max(report.deviations) <= n - 1

    def test_small_group_uses_group_size_for_precision(self):
        truth = [1, 2, 3]
        report = fit_report("r", 1, ["a", "b", "c"], truth, truth, [2, 1, 0])
        assert report.precision_at_10 == 1.0

    def test_document_round_trip(self):
        truth = [1, 2, 3, 4]
        report = fit_report("r", 1, list("abcd"), truth, [2, 1, 3, 4], [3, 2, 1, 0])
        assert FitReport.from_document(report.to_document()) == report
