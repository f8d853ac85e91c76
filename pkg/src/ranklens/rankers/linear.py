"""Linear surrogate rankers: pairwise hinge SVM, coordinate ascent, ListNet.

All three standardize attributes with training statistics (stored on the
model) and score with a plain dot product, so their weights are comparable
across attributes and gradient steps are scale-free.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from .base import BaseRanker, TrainingData, within_query_pairs

__all__ = ["RankingSVM", "CoordinateAscent", "ListNet", "listnet_loss_gradient"]


class _LinearScoreMixin:
    standardizes = True

    def _score(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights_

    def _params_to_doc(self) -> dict:
        return {"weights": [float(w) for w in self.weights_]}

    def _params_from_doc(self, doc: dict) -> None:
        self.weights_ = np.asarray(doc["weights"], dtype=np.float64)


class RankingSVM(_LinearScoreMixin, BaseRanker):
    """L2-regularized pairwise hinge loss over within-query pairs.

    Minimizes mean_pairs max(0, 1 - w·(x_i - x_j)) + l2·||w||^2 (the hinge-sum
    form scaled by the pair count) with projected stochastic sub-gradient
    descent from w = 0; the seed fixes the per-epoch pair shuffle.
    """

    algorithm = "RankingSVM"

    def __init__(self, l2=1e-3, epochs=50, batch_size=128, seed=0, ranker_id=None):
        self.l2 = l2
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        i_idx, j_idx = within_query_pairs(data)
        if i_idx.size == 0:
            raise TrainingError("no within-query pairs with distinct labels")
        X = self._transform(data.X)
        diffs = X[i_idx] - X[j_idx]
        m = diffs.shape[0]
        lam = 2.0 * self.l2
        radius = 1.0 / np.sqrt(lam)
        rng = np.random.default_rng(self.seed)
        w = np.zeros(data.n_features, dtype=np.float64)
        t = 0
        for _ in range(self.epochs):
            order = rng.permutation(m)
            for start in range(0, m, self.batch_size):
                batch = diffs[order[start:start + self.batch_size]]
                t += 1
                eta = 1.0 / (lam * t)
                margins = batch @ w
                violating = batch[margins < 1.0]
                w *= 1.0 - eta * lam
                if violating.size:
                    w += (eta / batch.shape[0]) * violating.sum(axis=0)
                norm = np.linalg.norm(w)
                if norm > radius:
                    w *= radius / norm
        self.weights_ = w


class CoordinateAscent(BaseRanker):
    """Linear scorer tuned one weight at a time to maximize mean NDCG@10.

    Each coordinate is line-searched over multiplicative steps w_j·(1 ± d·2^k)
    for k = 0..19 (additive ±d·2^k when the weight is zero); a full pass over
    the coordinates is one cycle, after which weights are renormalized to unit
    L1 norm. Runs ``restarts`` seeded random restarts and keeps the best.
    """

    algorithm = "CoordinateAscent"
    training_metric = "NDCG@10"
    standardizes = True

    def __init__(self, delta=0.05, n_steps=20, tol=1e-3, max_cycles=25, restarts=5,
                 seed=0, ranker_id=None):
        self.delta = delta
        self.n_steps = n_steps
        self.tol = tol
        self.max_cycles = max_cycles
        self.restarts = restarts
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        X = self._transform(data.X)
        p = data.n_features
        groups = []
        for sl in data.query_slices:
            labels = data.y[sl]
            depth = min(10, labels.size)
            disc = 1.0 / np.log2(np.arange(2, depth + 2))
            ideal = float(np.sort(labels)[::-1][:depth] @ disc)
            groups.append((X[sl], labels, disc, ideal, depth))

        def objective(w: np.ndarray) -> float:
            total = 0.0
            for Xq, labels, disc, ideal, depth in groups:
                if ideal == 0.0:
                    total += 1.0
                    continue
                s = Xq @ w
                order = np.lexsort((np.arange(s.size), -s))
                total += float(labels[order[:depth]] @ disc) / ideal
            return total / len(groups)

        steps = self.delta * 2.0 ** np.arange(self.n_steps)
        rng = np.random.default_rng(self.seed)
        best_w = None
        best_obj = -np.inf
        self.objective_trace_ = []
        for restart in range(self.restarts):
            if restart == 0:
                w = np.full(p, 1.0 / p)
            else:
                w = rng.uniform(-1.0, 1.0, size=p)
                l1 = np.abs(w).sum()
                if l1 > 0:
                    w /= l1
            current = objective(w)
            trace = [current]
            for _ in range(self.max_cycles):
                cycle_start = current
                for j in range(p):
                    if w[j] == 0.0:
                        candidates = np.concatenate([steps, -steps])
                    else:
                        candidates = np.concatenate([w[j] * (1.0 + steps), w[j] * (1.0 - steps)])
                    chosen = None
                    chosen_obj = current
                    for cand in candidates:
                        w_try = w.copy()
                        w_try[j] = cand
                        obj = objective(w_try)
                        if obj > chosen_obj:
                            chosen = cand
                            chosen_obj = obj
                    if chosen is not None:
                        w[j] = chosen
                        current = chosen_obj
                        trace.append(current)
                l1 = np.abs(w).sum()
                if l1 > 0:
                    w /= l1
                if current - cycle_start < self.tol:
                    break
            self.objective_trace_.append(trace)
            if current > best_obj:
                best_obj = current
                best_w = w.copy()
        self.weights_ = best_w
        self.train_objective_ = best_obj

    def _score(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights_

    def _params_to_doc(self) -> dict:
        return {"weights": [float(w) for w in self.weights_]}

    def _params_from_doc(self, doc: dict) -> None:
        self.weights_ = np.asarray(doc["weights"], dtype=np.float64)


def _rescale_labels(labels: np.ndarray) -> np.ndarray:
    """Min-max rescale one query's labels to [0, 4] to keep the softmax finite."""
    lo, hi = labels.min(), labels.max()
    if hi == lo:
        return np.zeros_like(labels, dtype=np.float64)
    return 4.0 * (labels - lo) / (hi - lo)


def listnet_loss_gradient(w: np.ndarray, groups) -> tuple[float, np.ndarray]:
    """Top-one-probability cross entropy and its gradient in w.

    ``groups`` is a list of (features, labels) per query; labels are rescaled
    to [0, 4] inside. Loss is summed over queries.
    """
    loss = 0.0
    grad = np.zeros_like(w)
    for X, labels in groups:
        s = X @ w
        s_shift = s - s.max()
        log_norm = np.log(np.exp(s_shift).sum())
        log_p = s_shift - log_norm
        p = np.exp(log_p)
        l4 = _rescale_labels(np.asarray(labels, dtype=np.float64))
        q = np.exp(l4 - l4.max())
        q /= q.sum()
        loss -= float(q @ log_p)
        grad += X.T @ (p - q)
    return loss, grad


class ListNet(_LinearScoreMixin, BaseRanker):
    """Linear scorer trained by gradient descent on the ListNet top-one loss."""

    algorithm = "ListNet"

    def __init__(self, epochs=200, learning_rate=1e-3, seed=0, ranker_id=None):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        X = self._transform(data.X)
        groups = [(X[sl], data.y[sl]) for sl in data.query_slices]
        w = np.zeros(data.n_features, dtype=np.float64)
        losses = []
        for _ in range(self.epochs):
            loss, grad = listnet_loss_gradient(w, groups)
            losses.append(loss)
            w -= self.learning_rate * grad
        self.weights_ = w
        self.loss_trace_ = losses
