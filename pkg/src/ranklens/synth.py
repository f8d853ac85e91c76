"""Synthetic linear fixture: known ground truth for recovery experiments.

Five attributes with different locations and scales, scored by a fixed weight
vector with no noise; each year re-draws the attribute values for the same
100 entities and ranks them by descending score. The published "total" column
carries the score so ingestion has something to drop.

Run ``python -m ranklens.synth OUTDIR`` to materialize the fixture as a CSV
plus a column-mapping file and a ready-to-use pipeline config.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

from .dataset import Candidate, ColumnMapping, QueryGroup, RankingTable, derive_relevance_table
from .rankers.base import rank

__all__ = ["TRUE_WEIGHTS", "ATTRIBUTE_MEANS", "ATTRIBUTE_SCALES", "linear_fixture_table",
           "write_fixture"]

TRUE_WEIGHTS = np.array([0.8, -1.6, 0.3, 1.1, -0.45])
ATTRIBUTE_MEANS = np.array([50.0, 0.0, 10.0, 5.0, 100.0])
ATTRIBUTE_SCALES = np.array([10.0, 1.0, 4.0, 2.0, 25.0])
ATTRIBUTE_NAMES = ("capacity", "volatility", "reach", "quality", "load")
DEFAULT_YEARS = tuple(range(2011, 2017))


def linear_fixture_table(*, dataset_id: str = "synthlin", n_candidates: int = 100,
                         years=DEFAULT_YEARS, seed: int = 7) -> RankingTable:
    """Noiseless table whose ground-truth ranking is induced by TRUE_WEIGHTS."""
    rng = np.random.default_rng(seed)
    ids = [f"ent-{i:03d}" for i in range(n_candidates)]
    groups = []
    for year in years:
        X = ATTRIBUTE_MEANS + rng.standard_normal((n_candidates, 5)) * ATTRIBUTE_SCALES
        scores = X @ TRUE_WEIGHTS
        ranks = rank(scores, ids)
        candidates = tuple(
            Candidate(
                candidate_id=ids[i],
                attributes=tuple(float(v) for v in X[i]),
                ground_truth_rank=int(ranks[i]),
            )
            for i in range(n_candidates)
        )
        groups.append(QueryGroup(query_id=int(year), candidates=candidates))
    table = RankingTable(
        dataset_id=dataset_id, attribute_names=ATTRIBUTE_NAMES, queries=tuple(groups)
    )
    return derive_relevance_table(table)


def fixture_mapping() -> ColumnMapping:
    return ColumnMapping(
        year="year",
        entity="name",
        rank="rank",
        attributes=ATTRIBUTE_NAMES,
        drop=("total",),
    )


def write_fixture(out_dir, *, seed: int = 7, n_candidates: int = 100,
                  years=DEFAULT_YEARS) -> dict[str, Path]:
    """Write fixture CSV, mapping and pipeline config; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = linear_fixture_table(n_candidates=n_candidates, years=years, seed=seed)

    csv_path = out / "synthlin.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "name", "rank", *ATTRIBUTE_NAMES, "total"])
        for group in table.queries:
            for cand in group.candidates:
                score = float(np.asarray(cand.attributes) @ TRUE_WEIGHTS)
                writer.writerow(
                    [group.query_id, cand.candidate_id, cand.ground_truth_rank,
                     *[repr(v) for v in cand.attributes], repr(score)]
                )

    config_path = out / "pipeline.yaml"
    config_path.write_text(
        "\n".join([
            "dataset:",
            "  id: synthlin",
            f"  csv: {csv_path}",
            "  mapping:",
            "    year: year",
            "    entity: name",
            "    rank: rank",
            f"    attributes: [{', '.join(ATTRIBUTE_NAMES)}]",
            "    drop: [total]",
            f"seed: {seed}",
            f"store: {out / 'store'}",
            "rankers:",
            "  - algorithm: RankingSVM",
            "  - algorithm: CoordinateAscent",
            "  - algorithm: ListNet",
            "  - algorithm: MART",
            "  - algorithm: LambdaMART",
            "  - algorithm: RankBoost",
            "explain:",
            "  n_samples: 200",
            "  grid_size: 10",
            "",
        ]),
        encoding="utf-8",
    )
    return {"csv": csv_path, "config": config_path}


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description="materialize the synthetic linear fixture")
    parser.add_argument("out_dir", help="output directory")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--candidates", type=int, default=100)
    args = parser.parse_args(argv)
    paths = write_fixture(args.out_dir, seed=args.seed, n_candidates=args.candidates)
    for name, path in paths.items():
        print(f"{name}: {path}")


if __name__ == "__main__":
    main()
