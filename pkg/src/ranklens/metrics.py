"""Goodness-of-fit measures between learned rankings and ground truth.

Conventions, chosen for rank-derived relevance labels and recorded on every
FitReport so values are not mistaken for other papers' variants:

* NDCG uses linear gain ``gain(l) = l``. Labels here span 0..n-1 (hundreds for
  the larger datasets), so the IR-conventional ``2^l - 1`` gain overflows and
  concentrates all weight on rank one.
* Precision@k and average precision treat an item as relevant iff its
  ground-truth rank is <= k. P@10 is then 1 exactly when the learned top-10
  set matches ground truth.
* A query whose labels are all zero has ideal DCG 0; its NDCG is defined as 1
  (vacuous truth) rather than 0 or NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .validation import check_rank_vector, check_same_length

__all__ = [
    "FitReport",
    "rank_deviation",
    "ndcg_at_k",
    "precision_at_k",
    "mean_average_precision",
    "kendall_tau",
    "fit_report",
]

GAIN_CONVENTION = "linear"
RELEVANCE_CONVENTION = "truth-rank<=k"


def rank_deviation(truth, learned) -> np.ndarray:
    """Elementwise |truth - learned| over two aligned rank vectors.

    Direction is intentionally discarded: a rank overshoot and undershoot of
    the same size are the same lack of fit.
    """
    t = check_rank_vector(truth, name="truth")
    l = check_rank_vector(learned, name="learned")
    check_same_length(t, l, names=("truth", "learned"))
    return np.abs(t - l)


def ndcg_at_k(truth_labels, learned_order, k: int) -> float:
    """NDCG@k of ``learned_order`` (item indices, best first) against labels.

    ``truth_labels[i]`` is the non-negative relevance of item ``i``;
    ``learned_order`` is a permutation of ``range(n)``.
    """
    labels = np.asarray(truth_labels, dtype=np.float64)
    if labels.ndim != 1:
        raise DataError("truth_labels must be 1-dimensional")
    if np.any(labels < 0):
        raise DataError("relevance labels must be non-negative")
    order = np.asarray(learned_order, dtype=np.int64)
    n = labels.size
    if order.ndim != 1 or not np.array_equal(np.sort(order), np.arange(n)):
        raise DataError(f"learned_order is not a permutation of 0..{n - 1}")
    if k < 1:
        raise DataError("k must be >= 1")

    depth = min(k, n)
    discounts = 1.0 / np.log2(np.arange(2, depth + 2))
    dcg = float(np.sum(labels[order[:depth]] * discounts))
    ideal = float(np.sum(np.sort(labels)[::-1][:depth] * discounts))
    if ideal == 0.0:
        return 1.0
    return dcg / ideal


def precision_at_k(truth, learned, k: int) -> float:
    """Fraction of the learned top-k whose ground-truth rank is also <= k."""
    t = check_rank_vector(truth, name="truth")
    l = check_rank_vector(learned, name="learned")
    check_same_length(t, l, names=("truth", "learned"))
    if k < 1:
        raise DataError("k must be >= 1")
    if k > t.size:
        raise DataError(f"k={k} exceeds the group size {t.size}")
    return float(np.sum((l <= k) & (t <= k))) / k


def mean_average_precision(truth, learned, *, relevant_top: int = 10) -> float:
    """Average precision over the learned order, binary relevance = truth top-k.

    Reported as MAP by averaging this value over queries at the report level.
    """
    t = check_rank_vector(truth, name="truth")
    l = check_rank_vector(learned, name="learned")
    check_same_length(t, l, names=("truth", "learned"))
    cutoff = min(relevant_top, t.size)
    relevant = t <= cutoff
    order = np.argsort(l)  # item at learned position 1 first
    hits = 0
    precision_sum = 0.0
    for position, item in enumerate(order, start=1):
        if relevant[item]:
            hits += 1
            precision_sum += hits / position
    return precision_sum / int(np.sum(relevant))


def kendall_tau(truth, learned) -> float:
    """Kendall rank correlation between two aligned rank vectors, in [-1, 1]."""
    t = check_rank_vector(truth, name="truth")
    l = check_rank_vector(learned, name="learned")
    check_same_length(t, l, names=("truth", "learned"))
    n = t.size
    if n < 2:
        return 1.0
    dt = np.sign(t[:, None] - t[None, :])
    dl = np.sign(l[:, None] - l[None, :])
    agree = dt * dl
    concordant_minus_discordant = int(np.sum(np.triu(agree, k=1)))
    return concordant_minus_discordant / math.comb(n, 2)


@dataclass(frozen=True)
class FitReport:
    """Itemized rank deviations plus summary metrics for one (ranker, query)."""

    ranker_id: str
    query_id: int
    candidate_ids: tuple[str, ...]
    deviations: tuple[int, ...]
    ndcg_at_10: float
    precision_at_10: float
    mean_average_precision: float

    def to_document(self) -> dict:
        return {
            "schema": "fit-report/1",
            "ranker_id": self.ranker_id,
            "query_id": self.query_id,
            "candidate_ids": list(self.candidate_ids),
            "deviations": list(self.deviations),
            "ndcg_at_10": self.ndcg_at_10,
            "precision_at_10": self.precision_at_10,
            "mean_average_precision": self.mean_average_precision,
            "conventions": {"gain": GAIN_CONVENTION, "relevance": RELEVANCE_CONVENTION},
        }

    @classmethod
    def from_document(cls, doc: dict) -> "FitReport":
        if doc.get("schema") != "fit-report/1":
            raise DataError(f"unsupported fit-report schema {doc.get('schema')!r}")
        return cls(
            ranker_id=doc["ranker_id"],
            query_id=doc["query_id"],
            candidate_ids=tuple(doc["candidate_ids"]),
            deviations=tuple(doc["deviations"]),
            ndcg_at_10=doc["ndcg_at_10"],
            precision_at_10=doc["precision_at_10"],
            mean_average_precision=doc["mean_average_precision"],
        )


def fit_report(ranker_id: str, query_id: int, candidate_ids, truth, learned,
               truth_labels) -> FitReport:
    """Build the FitReport for one query's learned ranking.

    P@10 falls back to k = n for groups smaller than 10 so the report stays
    total on tiny queries.
    """
    t = check_rank_vector(truth, name="truth")
    l = check_rank_vector(learned, name="learned")
    k = min(10, t.size)
    order = [int(i) for i in np.argsort(l)]
    return FitReport(
        ranker_id=ranker_id,
        query_id=query_id,
        candidate_ids=tuple(candidate_ids),
        deviations=tuple(int(d) for d in rank_deviation(t, l)),
        ndcg_at_10=ndcg_at_k(truth_labels, order, 10),
        precision_at_10=precision_at_k(t, l, k),
        mean_average_precision=mean_average_precision(t, l),
    )
