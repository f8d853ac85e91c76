"""Local attribute-importance explanations of fitted rankers.

Two per-instance methods over a shared data shape, so downstream comparison
and UI code is method-agnostic:

* LIME-style local surrogate: perturb the instance with Gaussian noise scaled
  by the background standard deviation of each attribute, score the samples
  with the ranker, and fit a distance-weighted ridge regression of the scores
  on the standardized sample features. The signed coefficients are the
  explanation. The regression target is the raw ranking score, never the
  integer rank: rank perturbation is direction-censored at the extremes, so
  regressing on ranks biases the samples.
* ICE feature impact: sweep one attribute over a quantile grid of background
  values holding the rest of the instance fixed, and report the mean absolute
  deviation of the score curve around its mean. Non-negative by construction.

The background is all candidates across all years. Attributes that are
constant in the background cannot be perturbed; they are held fixed and
flagged, and their importance is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import QueryGroup, RankingTable
from .errors import DataError, ExplainError
from .rankers.base import BaseRanker

__all__ = [
    "ExplainConfig",
    "LimeExplanation",
    "ExplanationMatrix",
    "NormalizedExplanation",
    "lime_explain",
    "ice_impact",
    "explain_range",
    "normalize_importance",
    "attribute_order",
    "background_stats",
]

METHODS = ("LIME", "ICE")
_QUANTILE_LEVELS_CACHE: dict[int, np.ndarray] = {}


@dataclass(frozen=True)
class ExplainConfig:
    """Sampling and regression settings shared by both explainers.

    ``kernel_width`` of None means 0.75 * sqrt(p), the usual default for
    tabular local surrogates. All values land in ``sampling_meta`` on the
    produced matrices, since they are declared assumptions rather than
    published settings.
    """

    n_samples: int = 500
    kernel_width: float | None = None
    ridge: float = 1e-3
    grid_size: int = 10

    def effective_kernel_width(self, n_attributes: int) -> float:
        if self.kernel_width is not None:
            return float(self.kernel_width)
        return 0.75 * math.sqrt(n_attributes)


def background_stats(background: RankingTable) -> tuple[np.ndarray, np.ndarray]:
    """Per-attribute mean and (population) std over all candidates, all years."""
    B = background.stacked_attributes()
    return B.mean(axis=0), B.std(axis=0)


def _grid_levels(g: int) -> np.ndarray:
    if g not in _QUANTILE_LEVELS_CACHE:
        _QUANTILE_LEVELS_CACHE[g] = (np.arange(g) + 0.5) / g
    return _QUANTILE_LEVELS_CACHE[g]


@dataclass
class LimeExplanation:
    """Surrogate coefficients plus the evidence needed to audit them."""

    coefficients: np.ndarray
    intercept: float
    samples: np.ndarray
    sample_scores: np.ndarray
    weights: np.ndarray
    degenerate: np.ndarray
    r_squared: float
    kernel_width: float


def lime_explain(ranker: BaseRanker, group: QueryGroup, instance_index: int,
                 background: RankingTable, cfg: ExplainConfig | None = None,
                 seed: int = 0) -> LimeExplanation:
    """Explain one candidate's score with a local weighted ridge surrogate."""
    cfg = cfg or ExplainConfig()
    if not 0 <= instance_index < group.size:
        raise DataError(
            f"instance index {instance_index} out of range for query {group.query_id} "
            f"(size {group.size})"
        )
    instance = np.asarray(group.candidates[instance_index].attributes, dtype=np.float64)
    mu, sigma = background_stats(background)
    p = mu.size
    active = sigma > 0.0
    kappa = cfg.effective_kernel_width(p)

    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((cfg.n_samples, p))
    samples = instance + eps * sigma  # degenerate attributes stay fixed (sigma 0)

    scores = ranker.predict(samples)
    d2 = np.sum(eps[:, active] ** 2, axis=1)
    with np.errstate(divide="ignore"):  # kappa underflow means zero weight, caught below
        weights = np.exp(-d2 / kappa**2)
    if not np.any(weights > 0.0):
        raise ExplainError(
            "all sample weights underflowed to zero; increase the kernel width"
        )

    # Weighted ridge with unpenalized intercept, via weighted centering plus a
    # sqrt(ridge) augmentation solved by least squares.
    u = (samples[:, active] - mu[active]) / sigma[active]
    w_total = weights.sum()
    u_bar = weights @ u / w_total
    y_bar = float(weights @ scores) / w_total
    sw = np.sqrt(weights)
    A = np.vstack([sw[:, None] * (u - u_bar), math.sqrt(cfg.ridge) * np.eye(u.shape[1])])
    b = np.concatenate([sw * (scores - y_bar), np.zeros(u.shape[1])])
    beta_active, *_ = np.linalg.lstsq(A, b, rcond=None)
    intercept = y_bar - float(u_bar @ beta_active)

    coefficients = np.zeros(p, dtype=np.float64)
    coefficients[active] = beta_active

    fitted = (u - u_bar) @ beta_active + u_bar @ beta_active + intercept
    ss_res = float(weights @ (scores - fitted) ** 2)
    ss_tot = float(weights @ (scores - y_bar) ** 2)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    return LimeExplanation(
        coefficients=coefficients,
        intercept=intercept,
        samples=samples,
        sample_scores=scores,
        weights=weights,
        degenerate=~active,
        r_squared=r_squared,
        kernel_width=kappa,
    )


def ice_impact(ranker: BaseRanker, group: QueryGroup, instance_index: int,
               attribute_index: int, background: RankingTable,
               cfg: ExplainConfig | None = None) -> float:
    """Mean absolute deviation of the score as one attribute sweeps its grid."""
    cfg = cfg or ExplainConfig()
    if not 0 <= instance_index < group.size:
        raise DataError(
            f"instance index {instance_index} out of range for query {group.query_id} "
            f"(size {group.size})"
        )
    B = background.stacked_attributes()
    if not 0 <= attribute_index < B.shape[1]:
        raise DataError(f"attribute index {attribute_index} out of range (p={B.shape[1]})")
    grid = np.quantile(B[:, attribute_index], _grid_levels(cfg.grid_size))
    instance = np.asarray(group.candidates[instance_index].attributes, dtype=np.float64)
    sweep = np.tile(instance, (cfg.grid_size, 1))
    sweep[:, attribute_index] = grid
    curve = ranker.predict(sweep)
    return float(np.mean(np.abs(curve - curve.mean())))


def _ice_impacts_row(ranker: BaseRanker, instance: np.ndarray, grids: np.ndarray,
                     g: int) -> np.ndarray:
    """All attribute impacts for one instance with a single batched scoring call."""
    p = instance.size
    sweep = np.tile(instance, (p * g, 1))
    for j in range(p):
        sweep[j * g:(j + 1) * g, j] = grids[j]
    curves = ranker.predict(sweep).reshape(p, g)
    return np.mean(np.abs(curves - curves.mean(axis=1, keepdims=True)), axis=1)


@dataclass(frozen=True)
class ExplanationMatrix:
    """Per-instance, per-attribute importances for one (ranker, query, method)."""

    ranker_id: str
    query_id: int
    method: str
    seed: int
    rank_range: tuple[int, int]
    attribute_names: tuple[str, ...]
    candidate_ids: tuple[str, ...]
    truth_ranks: tuple[int, ...]
    raw: np.ndarray
    sampling_meta: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "schema": "explanation/1",
            "ranker_id": self.ranker_id,
            "query_id": self.query_id,
            "method": self.method,
            "seed": self.seed,
            "rank_range": list(self.rank_range),
            "attribute_names": list(self.attribute_names),
            "candidate_ids": list(self.candidate_ids),
            "truth_ranks": list(self.truth_ranks),
            "raw": [[float(v) for v in row] for row in self.raw],
            "sampling_meta": self.sampling_meta,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ExplanationMatrix":
        if doc.get("schema") != "explanation/1":
            raise DataError(f"unsupported explanation schema {doc.get('schema')!r}")
        return cls(
            ranker_id=doc["ranker_id"],
            query_id=doc["query_id"],
            method=doc["method"],
            seed=doc["seed"],
            rank_range=tuple(doc["rank_range"]),
            attribute_names=tuple(doc["attribute_names"]),
            candidate_ids=tuple(doc["candidate_ids"]),
            truth_ranks=tuple(doc["truth_ranks"]),
            raw=np.asarray(doc["raw"], dtype=np.float64),
            sampling_meta=dict(doc["sampling_meta"]),
        )


def explain_range(ranker: BaseRanker, group: QueryGroup, method: str,
                  rank_range: tuple[int, int], background: RankingTable,
                  cfg: ExplainConfig | None = None, seed: int = 0) -> ExplanationMatrix:
    """Run the per-instance explainer for every candidate whose ground-truth
    rank falls in ``rank_range`` (inclusive, anchored on ground truth).

    Instances are independent given the seed: instance ``i`` uses seed ^ i, so
    concurrent and sequential execution agree.
    """
    cfg = cfg or ExplainConfig()
    if method not in METHODS:
        raise DataError(f"unknown explanation method {method!r}; expected one of {METHODS}")
    lo, hi = rank_range
    if not (1 <= lo <= hi <= group.size):
        raise DataError(
            f"rank range ({lo}, {hi}) is empty or outside 1..{group.size}"
        )
    p = background.n_attributes
    _, sigma = background_stats(background)
    degenerate = [int(j) for j in np.nonzero(sigma == 0.0)[0]]
    if method == "ICE":
        B = background.stacked_attributes()
        grids = np.vstack([
            np.quantile(B[:, j], _grid_levels(cfg.grid_size)) for j in range(p)
        ])

    rows = []
    ids = []
    ranks = []
    for index, cand in enumerate(group.candidates):
        if not lo <= cand.ground_truth_rank <= hi:
            continue
        if method == "LIME":
            result = lime_explain(ranker, group, index, background, cfg, seed=seed ^ index)
            rows.append(result.coefficients)
        else:
            instance = np.asarray(cand.attributes, dtype=np.float64)
            rows.append(_ice_impacts_row(ranker, instance, grids, cfg.grid_size))
        ids.append(cand.candidate_id)
        ranks.append(cand.ground_truth_rank)

    meta: dict = {"degenerate_attributes": degenerate}
    if method == "LIME":
        meta.update(
            n_samples=cfg.n_samples,
            kernel_width=cfg.effective_kernel_width(p),
            ridge=cfg.ridge,
        )
    else:
        meta.update(grid_size=cfg.grid_size)

    return ExplanationMatrix(
        ranker_id=ranker.ranker_id_,
        query_id=group.query_id,
        method=method,
        seed=seed,
        rank_range=(lo, hi),
        attribute_names=tuple(background.attribute_names),
        candidate_ids=tuple(ids),
        truth_ranks=tuple(ranks),
        raw=np.vstack(rows),
        sampling_meta=meta,
    )


@dataclass(frozen=True)
class NormalizedExplanation:
    """Min-max normalized importances over one rank range, with group means."""

    rank_range: tuple[int, int]
    candidate_ids: tuple[str, ...]
    truth_ranks: tuple[int, ...]
    values: np.ndarray
    group_means: np.ndarray


def normalize_importance(matrix: ExplanationMatrix,
                         rank_range: tuple[int, int] | None = None) -> NormalizedExplanation:
    """Joint min-max normalization of all entries in the range to [0, 1].

    One min and one max per (ranker, method, range), not per attribute, so the
    relative difference between attributes is preserved. A constant matrix
    maps to all 0.5.
    """
    lo, hi = rank_range if rank_range is not None else matrix.rank_range
    keep = [
        i for i, r in enumerate(matrix.truth_ranks) if lo <= r <= hi
    ]
    if not keep:
        raise DataError(
            f"no candidates with ground-truth rank in ({lo}, {hi}) in this matrix"
        )
    sub = matrix.raw[keep]
    low = float(sub.min())
    high = float(sub.max())
    if high == low:
        values = np.full_like(sub, 0.5, dtype=np.float64)
    else:
        values = (sub - low) / (high - low)
    return NormalizedExplanation(
        rank_range=(lo, hi),
        candidate_ids=tuple(matrix.candidate_ids[i] for i in keep),
        truth_ranks=tuple(matrix.truth_ranks[i] for i in keep),
        values=values,
        group_means=values.mean(axis=0),
    )


def attribute_order(norm: NormalizedExplanation) -> list[int]:
    """Attribute indices by descending group mean; ties by ascending index.

    Truncation to a top-k view is a presentation concern, not applied here.
    """
    means = norm.group_means
    return [int(j) for j in np.lexsort((np.arange(means.size), -means))]
