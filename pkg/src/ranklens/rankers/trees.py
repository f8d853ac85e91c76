"""Gradient-boosted regression trees: pointwise MART and listwise LambdaMART.

Trees are grown best-first (leaf-wise) up to a leaf budget, with greedy
variance-reduction splits. All tie-breaking is total so repeated runs agree
bit-for-bit: within a node, equal-gain splits resolve to the lowest feature
index then the lowest threshold; across the frontier, equal-gain leaves
resolve to the oldest node. Thresholds are midpoints between consecutive
distinct sorted values.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from ..metrics import ndcg_at_k
from .base import BaseRanker, TrainingData

__all__ = ["RegressionTree", "TreeEnsembleModel", "MART", "LambdaMART"]

_NO_FEATURE = -1


class RegressionTree:
    """Flat-array binary regression tree; rows go left when x[feature] <= threshold."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.float64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if rows.size == 0:
                continue
            f = self.feature[node]
            if f == _NO_FEATURE:
                out[rows] = self.value[node]
                continue
            go_left = X[rows, f] <= self.threshold[node]
            stack.append((self.left[node], rows[go_left]))
            stack.append((self.right[node], rows[~go_left]))
        return out

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node index for each row."""
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if rows.size == 0:
                continue
            f = self.feature[node]
            if f == _NO_FEATURE:
                out[rows] = node
                continue
            go_left = X[rows, f] <= self.threshold[node]
            stack.append((self.left[node], rows[go_left]))
            stack.append((self.right[node], rows[~go_left]))
        return out

    def leaf_nodes(self) -> np.ndarray:
        return np.nonzero(self.feature == _NO_FEATURE)[0]

    def to_doc(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "RegressionTree":
        return cls(doc["feature"], doc["threshold"], doc["left"], doc["right"], doc["value"])


def _best_split(X, rows, targets, min_samples_leaf):
    """Best (gain, feature, threshold) for one node, or None when unsplittable.

    Gain is the SSE reduction sum_L^2/n_L + sum_R^2/n_R - total^2/n. Features
    are scanned in ascending index and thresholds in ascending value with a
    strict improvement test, which realizes the documented tie-breaking.
    """
    y = targets[rows]
    n = rows.size
    if n < 2 * min_samples_leaf:
        return None
    total = y.sum()
    base = total * total / n
    best = None
    for j in range(X.shape[1]):
        xs = X[rows, j]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        ys_sorted = y[order]
        csum = np.cumsum(ys_sorted)[:-1]
        counts = np.arange(1, n)
        distinct = xs_sorted[1:] > xs_sorted[:-1]
        valid = distinct & (counts >= min_samples_leaf) & ((n - counts) >= min_samples_leaf)
        if not np.any(valid):
            continue
        gains = np.where(
            valid,
            csum**2 / counts + (total - csum) ** 2 / (n - counts) - base,
            -np.inf,
        )
        k = int(np.argmax(gains))  # first max: lowest threshold
        gain = float(gains[k])
        if gain <= 0.0:
            continue
        if best is None or gain > best[0]:
            threshold = (xs_sorted[k] + xs_sorted[k + 1]) / 2.0
            best = (gain, j, float(threshold))
    return best


def build_regression_tree(X, targets, rows, *, max_leaves, min_samples_leaf) -> RegressionTree:
    """Grow a tree best-first until ``max_leaves`` leaves or no positive-gain split."""
    feature = [_NO_FEATURE]
    threshold = [0.0]
    left = [_NO_FEATURE]
    right = [_NO_FEATURE]
    value = [float(targets[rows].mean()) if rows.size else 0.0]
    node_rows = {0: rows}
    # Frontier entries: (node, rows, best-split-or-None); oldest node wins ties.
    frontier = [(0, rows, _best_split(X, rows, targets, min_samples_leaf))]
    n_leaves = 1
    while n_leaves < max_leaves:
        best_entry = None
        for entry in frontier:
            if entry[2] is None:
                continue
            if best_entry is None or entry[2][0] > best_entry[2][0]:
                best_entry = entry
        if best_entry is None:
            break
        node, rows_here, (gain, f, thr) = best_entry
        frontier.remove(best_entry)
        xs = X[rows_here, f]
        rows_left = rows_here[xs <= thr]
        rows_right = rows_here[xs > thr]

        left_id = len(feature)
        right_id = left_id + 1
        for child_rows in (rows_left, rows_right):
            feature.append(_NO_FEATURE)
            threshold.append(0.0)
            left.append(_NO_FEATURE)
            right.append(_NO_FEATURE)
            value.append(float(targets[child_rows].mean()))
        feature[node] = f
        threshold[node] = thr
        left[node] = left_id
        right[node] = right_id
        value[node] = 0.0
        node_rows[left_id] = rows_left
        node_rows[right_id] = rows_right
        frontier.append((left_id, rows_left, _best_split(X, rows_left, targets, min_samples_leaf)))
        frontier.append((right_id, rows_right, _best_split(X, rows_right, targets, min_samples_leaf)))
        n_leaves += 1
    return RegressionTree(feature, threshold, left, right, value)


class TreeEnsembleModel:
    """Additive tree model: score = base_score + learning_rate * sum(tree(x)).

    An ensemble with zero trees and zero base score maps every row to 0.
    """

    def __init__(self, base_score: float = 0.0, learning_rate: float = 1.0, trees=None):
        self.base_score = float(base_score)
        self.learning_rate = float(learning_rate)
        self.trees: list[RegressionTree] = list(trees) if trees else []

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            scores += self.learning_rate * tree.predict(X)
        return scores

    def to_doc(self) -> dict:
        return {
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "trees": [t.to_doc() for t in self.trees],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TreeEnsembleModel":
        return cls(
            base_score=doc["base_score"],
            learning_rate=doc["learning_rate"],
            trees=[RegressionTree.from_doc(t) for t in doc["trees"]],
        )


def _check_tree_preconditions(data: TrainingData) -> None:
    if data.n_features < 1:
        raise TrainingError("tree trainers need at least one attribute")
    if np.unique(data.y).size < 2:
        raise TrainingError("all training rows carry the same relevance label")


class MART(BaseRanker):
    """Pointwise gradient-boosted trees: least-squares fit to relevance labels."""

    algorithm = "MART"

    def __init__(self, trees=100, leaves=10, learning_rate=0.1, min_samples_leaf=1,
                 seed=0, ranker_id=None):
        self.trees = trees
        self.leaves = leaves
        self.learning_rate = learning_rate
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        _check_tree_preconditions(data)
        X, y = data.X, data.y
        rows = np.arange(X.shape[0])
        model = TreeEnsembleModel(base_score=float(y.mean()), learning_rate=self.learning_rate)
        current = np.full(X.shape[0], model.base_score, dtype=np.float64)
        for _ in range(self.trees):
            residual = y - current
            tree = build_regression_tree(
                X, residual, rows,
                max_leaves=self.leaves, min_samples_leaf=self.min_samples_leaf,
            )
            model.trees.append(tree)
            current += self.learning_rate * tree.predict(X)
        self.model_ = model

    def _score(self, X: np.ndarray) -> np.ndarray:
        return self.model_.predict(X)

    def _params_to_doc(self) -> dict:
        return self.model_.to_doc()

    def _params_from_doc(self, doc: dict) -> None:
        self.model_ = TreeEnsembleModel.from_doc(doc)


def _truncated_discounts(positions: np.ndarray, k: int) -> np.ndarray:
    """1/log2(1+pos) for positions <= k, else 0. Positions are 1-based."""
    disc = np.where(positions <= k, 1.0 / np.log2(positions + 1.0), 0.0)
    return disc


def lambda_gradients(scores: np.ndarray, labels: np.ndarray, k: int = 10):
    """Per-document lambdas and second-order weights for one query.

    For each pair with label_i > label_j, rho = 1/(1+exp(s_i - s_j)) and
    delta = |NDCG@k change if i and j swapped positions|; the better document
    accumulates +rho*delta, the worse one -rho*delta, and both accumulate
    rho*(1-rho)*delta into the Newton weights.
    """
    n = scores.size
    order = np.lexsort((np.arange(n), -scores))  # descending score, index breaks ties
    positions = np.empty(n, dtype=np.int64)
    positions[order] = np.arange(1, n + 1)

    depth = min(k, n)
    ideal = float(np.sum(np.sort(labels)[::-1][:depth] / np.log2(np.arange(2, depth + 2))))
    lambdas = np.zeros(n, dtype=np.float64)
    weights = np.zeros(n, dtype=np.float64)
    if ideal == 0.0:
        return lambdas, weights

    disc = _truncated_discounts(positions, k)
    better = labels[:, None] > labels[None, :]
    if not np.any(better):
        return lambdas, weights
    delta = np.abs((labels[:, None] - labels[None, :]) * (disc[:, None] - disc[None, :])) / ideal
    with np.errstate(over="ignore"):
        rho = 1.0 / (1.0 + np.exp(scores[:, None] - scores[None, :]))
    pair_lambda = np.where(better, rho * delta, 0.0)
    pair_weight = np.where(better, rho * (1.0 - rho) * delta, 0.0)
    lambdas = pair_lambda.sum(axis=1) - pair_lambda.sum(axis=0)
    weights = pair_weight.sum(axis=1) + pair_weight.sum(axis=0)
    return lambdas, weights


class LambdaMART(BaseRanker):
    """Boosted trees driven by NDCG lambda gradients with Newton leaf values.

    ``gradient_truncation`` is the position depth at which the swap deltas are
    computed (None means the full list, the original LambdaRank formulation).
    Truncating the gradient at the evaluation depth of 10 leaves every pair
    below position 10 with zero gradient, which optimizes the top of the list
    but abandons the global ordering; full-depth deltas recover both.
    """

    algorithm = "LambdaMART"
    training_metric = "NDCG@10"

    def __init__(self, trees=100, leaves=10, learning_rate=0.1, min_samples_leaf=1,
                 gradient_truncation=None, seed=0, ranker_id=None):
        self.trees = trees
        self.leaves = leaves
        self.learning_rate = learning_rate
        self.min_samples_leaf = min_samples_leaf
        self.gradient_truncation = gradient_truncation
        self.seed = seed
        self.ranker_id = ranker_id

    def _fit(self, data: TrainingData) -> None:
        _check_tree_preconditions(data)
        X, y = data.X, data.y
        n = X.shape[0]
        rows = np.arange(n)
        model = TreeEnsembleModel(base_score=0.0, learning_rate=self.learning_rate)
        current = np.zeros(n, dtype=np.float64)
        for _ in range(self.trees):
            lambdas = np.zeros(n, dtype=np.float64)
            weights = np.zeros(n, dtype=np.float64)
            for sl in data.query_slices:
                depth = self.gradient_truncation or (sl.stop - sl.start)
                lam, w = lambda_gradients(current[sl], y[sl], k=depth)
                lambdas[sl] = lam
                weights[sl] = w
            tree = build_regression_tree(
                X, lambdas, rows,
                max_leaves=self.leaves, min_samples_leaf=self.min_samples_leaf,
            )
            leaf_of_row = tree.apply(X)
            for leaf in tree.leaf_nodes():
                members = rows[leaf_of_row == leaf]
                denom = weights[members].sum()
                tree.value[leaf] = lambdas[members].sum() / denom if denom > 0 else 0.0
            model.trees.append(tree)
            current += self.learning_rate * tree.predict(X)
        self.model_ = model

    def _score(self, X: np.ndarray) -> np.ndarray:
        return self.model_.predict(X)

    def _params_to_doc(self) -> dict:
        return self.model_.to_doc()

    def _params_from_doc(self, doc: dict) -> None:
        self.model_ = TreeEnsembleModel.from_doc(doc)


def ndcg_delta_by_swap(labels, order, i_pos, j_pos, k: int = 10) -> float:
    """NDCG@k change when the items at two 1-based positions swap. Test aid."""
    order = list(order)
    swapped = list(order)
    swapped[i_pos - 1], swapped[j_pos - 1] = swapped[j_pos - 1], swapped[i_pos - 1]
    return ndcg_at_k(labels, swapped, k) - ndcg_at_k(labels, order, k)
