"""Item-wise agreement between the two explanation methods.

For each candidate, the LIME magnitudes and the ICE impacts (each min-max
normalized over the rank range) are correlated with Pearson's r. Magnitudes
are used because ICE is intrinsically unsigned. A candidate whose importance
vector is constant under either method has no defined correlation; it is
flagged as undefined rather than scored 0, to avoid fabricating consensus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .explain import ExplanationMatrix, normalize_importance

__all__ = ["AgreementReport", "pearson_agreement", "agreement_histogram",
           "agreement_report", "histogram_dsv"]

N_BINS = 20


def pearson_agreement(lime_row, ice_row) -> float | None:
    """Pearson r between two importance vectors; None when either is constant."""
    a = np.asarray(lime_row, dtype=np.float64)
    b = np.asarray(ice_row, dtype=np.float64)
    if a.shape != b.shape:
        raise DataError(f"importance vectors differ in length: {a.shape} vs {b.shape}")
    if a.ndim != 1 or a.size < 2:
        raise DataError("importance vectors must be 1-dimensional with length >= 2")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.sum(da**2) * np.sum(db**2))
    if denom == 0.0:
        return None
    r = float(np.sum(da * db) / denom)
    return max(-1.0, min(1.0, r))


def agreement_histogram(correlations) -> tuple[list[int], float | None]:
    """20 equal-width bins over [-1, 1] for the defined correlations, plus median.

    Bins are half-open with the last bin closed (numpy's convention), so every
    defined r lands in exactly one bin and counts sum to the defined count.
    """
    defined = [r for r in correlations if r is not None]
    counts, _ = np.histogram(defined, bins=N_BINS, range=(-1.0, 1.0))
    median = float(np.median(defined)) if defined else None
    return [int(c) for c in counts], median


@dataclass(frozen=True)
class AgreementReport:
    ranker_id: str
    query_id: int
    candidate_ids: tuple[str, ...]
    correlations: tuple[float | None, ...]
    histogram: tuple[int, ...]
    median: float | None

    @property
    def n_defined(self) -> int:
        return sum(1 for r in self.correlations if r is not None)

    def to_document(self) -> dict:
        return {
            "schema": "agreement/1",
            "ranker_id": self.ranker_id,
            "query_id": self.query_id,
            "candidate_ids": list(self.candidate_ids),
            "correlations": list(self.correlations),
            "histogram": list(self.histogram),
            "median": self.median,
            "n_defined": self.n_defined,
        }

    @classmethod
    def from_document(cls, doc: dict) -> "AgreementReport":
        if doc.get("schema") != "agreement/1":
            raise DataError(f"unsupported agreement schema {doc.get('schema')!r}")
        return cls(
            ranker_id=doc["ranker_id"],
            query_id=doc["query_id"],
            candidate_ids=tuple(doc["candidate_ids"]),
            correlations=tuple(doc["correlations"]),
            histogram=tuple(doc["histogram"]),
            median=doc["median"],
        )


def histogram_dsv(report: "AgreementReport", *, delimiter: str = "\t") -> str:
    """Histogram as delimiter-separated values (bin_lo, bin_hi, count) for
    external plotting tools."""
    edges = [(i - N_BINS // 2) / (N_BINS // 2) for i in range(N_BINS + 1)]
    lines = [delimiter.join(["bin_lo", "bin_hi", "count"])]
    for i, count in enumerate(report.histogram):
        lines.append(delimiter.join([repr(edges[i]), repr(edges[i + 1]), str(count)]))
    return "\n".join(lines) + "\n"


def agreement_report(lime_matrix: ExplanationMatrix, ice_matrix: ExplanationMatrix,
                     *, normalized: bool = True,
                     use_magnitudes: bool = True) -> AgreementReport:
    """Correlate LIME and ICE explanations candidate by candidate.

    ``use_magnitudes=False`` keeps the signed LIME coefficients (ICE is
    unsigned either way). ``normalized=False`` correlates the raw values;
    Pearson r is invariant under the (positive affine) normalization on
    non-constant vectors, so that switch only matters for how constancy is
    detected.
    """
    if (lime_matrix.ranker_id, lime_matrix.query_id) != (ice_matrix.ranker_id, ice_matrix.query_id):
        raise DataError("agreement needs LIME and ICE matrices for the same ranker and query")
    if lime_matrix.candidate_ids != ice_matrix.candidate_ids:
        raise DataError("LIME and ICE matrices cover different candidates")

    lime_abs = ExplanationMatrix(
        ranker_id=lime_matrix.ranker_id,
        query_id=lime_matrix.query_id,
        method=lime_matrix.method,
        seed=lime_matrix.seed,
        rank_range=lime_matrix.rank_range,
        attribute_names=lime_matrix.attribute_names,
        candidate_ids=lime_matrix.candidate_ids,
        truth_ranks=lime_matrix.truth_ranks,
        raw=np.abs(lime_matrix.raw) if use_magnitudes else lime_matrix.raw,
        sampling_meta=lime_matrix.sampling_meta,
    )
    if normalized:
        lime_values = normalize_importance(lime_abs).values
        ice_values = normalize_importance(ice_matrix).values
    else:
        lime_values = lime_abs.raw
        ice_values = ice_matrix.raw

    correlations = tuple(
        pearson_agreement(lime_values[i], ice_values[i]) for i in range(lime_values.shape[0])
    )
    histogram, median = agreement_histogram(correlations)
    return AgreementReport(
        ranker_id=lime_matrix.ranker_id,
        query_id=lime_matrix.query_id,
        candidate_ids=lime_matrix.candidate_ids,
        correlations=correlations,
        histogram=tuple(histogram),
        median=median,
    )
