"""RankBoost over threshold stumps.

Weak rankers are indicator stumps h(x) = 1[x_j > t] with ten candidate
thresholds per feature, placed at the decile midpoints (5%, 15%, ..., 95%
quantiles) of the training values. Each round picks the stump maximizing
|r| with r = sum_pairs D(i,j)·(h(x_i) - h(x_j)) over the current pair
distribution; maximizing |r| rather than signed r lets a negative stump
weight exploit attributes that hurt the rank, which indicator stumps cannot
express otherwise. The stump weight is alpha = ln((1+r)/(1-r))/2 and D is
re-weighted by exp(-alpha·(h(x_i) - h(x_j))) and renormalized. A perfectly
separating stump would give |r| = 1, so r is clamped to 1 - 1e-10 in
magnitude.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from .base import BaseRanker, TrainingData, within_query_pairs

__all__ = ["RankBoost", "decile_thresholds"]

_R_CLAMP = 1.0 - 1e-10
_QUANTILE_LEVELS = (np.arange(10) + 0.5) / 10.0


def decile_thresholds(column: np.ndarray) -> np.ndarray:
    """Ten candidate stump thresholds for one feature column."""
    return np.quantile(column, _QUANTILE_LEVELS)


class RankBoost(BaseRanker):
    """Pairwise boosting of threshold stumps."""

    algorithm = "RankBoost"

    def __init__(self, rounds=300, seed=0, ranker_id=None):
        self.rounds = rounds
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        i_idx, j_idx = within_query_pairs(data)
        if i_idx.size == 0:
            raise TrainingError("no within-query pairs with distinct labels")
        X = data.X
        p = data.n_features

        features = []
        thresholds = []
        for j in range(p):
            for thr in decile_thresholds(X[:, j]):
                features.append(j)
                thresholds.append(float(thr))
        features = np.asarray(features, dtype=np.int64)
        thresholds = np.asarray(thresholds, dtype=np.float64)

        # (n_stumps, n_docs) indicator table, then per-pair differences.
        H = (X[:, features].T > thresholds[:, None]).astype(np.float64)
        Hdiff = H[:, i_idx] - H[:, j_idx]

        m = i_idx.size
        D = np.full(m, 1.0 / m)
        stumps = []
        for _ in range(self.rounds):
            r = Hdiff @ D
            best = int(np.argmax(np.abs(r)))  # first max: lowest feature, lowest threshold
            r_best = float(np.clip(r[best], -_R_CLAMP, _R_CLAMP))
            alpha = 0.5 * np.log((1.0 + r_best) / (1.0 - r_best))
            stumps.append((int(features[best]), float(thresholds[best]), float(alpha)))
            D = D * np.exp(-alpha * Hdiff[best])
            D /= D.sum()
        self.stumps_ = stumps

    def _score(self, X: np.ndarray) -> np.ndarray:
        scores = np.zeros(X.shape[0], dtype=np.float64)
        for feature, threshold, alpha in self.stumps_:
            scores += alpha * (X[:, feature] > threshold)
        return scores

    def _params_to_doc(self) -> dict:
        return {
            "stumps": [
                {"feature": f, "threshold": t, "alpha": a} for f, t, a in self.stumps_
            ]
        }

    def _params_from_doc(self, doc: dict) -> None:
        self.stumps_ = [
            (s["feature"], s["threshold"], s["alpha"]) for s in doc["stumps"]
        ]
