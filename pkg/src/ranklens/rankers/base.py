"""Shared estimator machinery for the surrogate rankers.

All rankers are sklearn-style estimators: hyperparameters live in ``__init__``
(so ``get_params`` / ``set_params`` / ``clone`` work), fitted state carries a
trailing underscore, ``fit`` takes a RankingTable and ``predict`` maps an
(n, p) attribute matrix to one real score per row. Scoring is deterministic
and pure; learned models are immutable after ``fit``.

Linear trainers standardize attributes (z-score with training statistics) so
gradient steps are scale-free; the statistics are stored on the model, keeping
``predict`` self-contained. Tree and stump trainers consume raw values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ..dataset import QueryGroup, RankingTable
from ..errors import DataError, TrainingError
from ..validation import check_matrix, check_same_length, check_vector

__all__ = ["BaseRanker", "LearnedRanking", "rank", "score", "learned_ranking"]


def rank(scores, candidate_ids) -> np.ndarray:
    """1-based ranks under descending score; ties broken by ascending candidate_id."""
    s = check_vector(scores, name="scores")
    check_same_length(s, candidate_ids, names=("scores", "candidate_ids"))
    if np.any(np.isnan(s)):
        raise DataError("scores contain NaN; the model that produced them is broken")
    order = sorted(range(s.size), key=lambda i: (-s[i], str(candidate_ids[i])))
    ranks = np.empty(s.size, dtype=np.int64)
    for position, i in enumerate(order, start=1):
        ranks[i] = position
    return ranks


def score(ranker: "BaseRanker", X) -> np.ndarray:
    """Score each row of ``X`` with a fitted ranker."""
    return ranker.predict(X)


@dataclass(frozen=True)
class LearnedRanking:
    """Scores and proxy ranking produced by one ranker on one query."""

    ranker_id: str
    query_id: int
    candidate_ids: tuple[str, ...]
    scores: tuple[float, ...]
    proxy_ranks: tuple[int, ...]

    def to_document(self) -> dict:
        return {
            "schema": "learned-ranking/1",
            "ranker_id": self.ranker_id,
            "query_id": self.query_id,
            "candidate_ids": list(self.candidate_ids),
            "scores": list(self.scores),
            "proxy_ranks": list(self.proxy_ranks),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "LearnedRanking":
        if doc.get("schema") != "learned-ranking/1":
            raise DataError(f"unsupported learned-ranking schema {doc.get('schema')!r}")
        return cls(
            ranker_id=doc["ranker_id"],
            query_id=doc["query_id"],
            candidate_ids=tuple(doc["candidate_ids"]),
            scores=tuple(doc["scores"]),
            proxy_ranks=tuple(doc["proxy_ranks"]),
        )


def learned_ranking(ranker: "BaseRanker", group: QueryGroup) -> LearnedRanking:
    """Apply a fitted ranker to one query group."""
    scores = ranker.predict(group.attribute_matrix())
    ids = group.candidate_ids()
    ranks = rank(scores, ids)
    return LearnedRanking(
        ranker_id=ranker.ranker_id_,
        query_id=group.query_id,
        candidate_ids=tuple(ids),
        scores=tuple(float(s) for s in scores),
        proxy_ranks=tuple(int(r) for r in ranks),
    )


@dataclass
class TrainingData:
    """Stacked training rows with per-query slices."""

    X: np.ndarray            # (n, p) raw attribute values
    y: np.ndarray            # (n,) relevance labels
    query_slices: list[slice]
    query_ids: list[int]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def gather_training_data(table: RankingTable) -> TrainingData:
    X = table.stacked_attributes()
    y = np.concatenate([g.relevance_labels() for g in table.queries]).astype(np.float64)
    slices = []
    start = 0
    for g in table.queries:
        slices.append(slice(start, start + g.size))
        start += g.size
    return TrainingData(X=X, y=y, query_slices=slices, query_ids=table.query_ids())


def within_query_pairs(data: TrainingData) -> tuple[np.ndarray, np.ndarray]:
    """Global row indices (i, j) of all within-query pairs with label_i > label_j."""
    left = []
    right = []
    for sl in data.query_slices:
        labels = data.y[sl]
        idx = np.arange(sl.start, sl.stop)
        diff = labels[:, None] > labels[None, :]
        ii, jj = np.nonzero(diff)
        left.append(idx[ii])
        right.append(idx[jj])
    i_idx = np.concatenate(left) if left else np.array([], dtype=np.int64)
    j_idx = np.concatenate(right) if right else np.array([], dtype=np.int64)
    return i_idx, j_idx


class BaseRanker(BaseEstimator):
    """Base class; subclasses set ``algorithm`` and implement ``_fit`` / ``_score``."""

    algorithm: str = ""
    training_metric: str = "none"
    standardizes: bool = False

    def fit(self, table: RankingTable) -> "BaseRanker":
        if not isinstance(table, RankingTable):
            raise DataError("fit expects a RankingTable")
        data = gather_training_data(table)
        if data.n_features < 1:
            raise TrainingError("training table has no attributes")
        self.n_features_in_ = data.n_features
        self.ranker_id_ = getattr(self, "ranker_id", None) or self.algorithm
        if self.standardizes:
            self.feature_mean_ = data.X.mean(axis=0)
            scale = data.X.std(axis=0)
            self.feature_scale_ = np.where(scale == 0.0, 1.0, scale)
        self._fit(data)
        return self

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_matrix(X, expected_columns=self.n_features_in_, name="X")
        return self._score(self._transform(X))

    # -- hooks ------------------------------------------------------------

    def _fit(self, data: TrainingData) -> None:
        raise NotImplementedError

    def _score(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _transform(self, X: np.ndarray) -> np.ndarray:
        if self.standardizes:
            return (X - self.feature_mean_) / self.feature_scale_
        return X

    def _check_fitted(self) -> None:
        if not hasattr(self, "n_features_in_"):
            raise TrainingError(f"{type(self).__name__} is not fitted")

    # -- serialization -----------------------------------------------------

    def _params_to_doc(self) -> dict:
        raise NotImplementedError

    def _params_from_doc(self, doc: dict) -> None:
        raise NotImplementedError

    def hyperparameter_record(self) -> dict:
        record = self.get_params()
        record.pop("ranker_id", None)
        record.pop("seed", None)
        return record

    def to_document(self) -> dict:
        self._check_fitted()
        doc = {
            "schema": "ranker/1",
            "algorithm": self.algorithm,
            "ranker_id": self.ranker_id_,
            "seed": int(getattr(self, "seed", 0)),
            "training_metric": self.training_metric,
            "hyperparameters": _plain(self.hyperparameter_record()),
            "n_features": int(self.n_features_in_),
            "standardization": (
                {
                    "mean": [float(v) for v in self.feature_mean_],
                    "scale": [float(v) for v in self.feature_scale_],
                }
                if self.standardizes
                else None
            ),
            "params": _plain(self._params_to_doc()),
        }
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> "BaseRanker":
        hp = dict(doc["hyperparameters"])
        hp["seed"] = doc["seed"]
        hp["ranker_id"] = doc["ranker_id"]
        ranker = cls(**hp)
        ranker.n_features_in_ = doc["n_features"]
        ranker.ranker_id_ = doc["ranker_id"]
        if cls.standardizes:
            std = doc["standardization"]
            ranker.feature_mean_ = np.asarray(std["mean"], dtype=np.float64)
            ranker.feature_scale_ = np.asarray(std["scale"], dtype=np.float64)
        ranker._params_from_doc(doc["params"])
        return ranker


def _plain(value):
    """Recursively convert numpy scalars/arrays so json output is pure Python."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value
