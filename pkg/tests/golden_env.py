"""Deterministic service fixture store and the golden request list.

The store is built from the synthetic linear fixture (30 candidates, 3 years,
2 rankers) plus a university-sized dataset artifact (818 entities x 6 years x
10 attributes) for the enumeration endpoints. Everything is seeded, so two
builds produce byte-identical artifacts and the committed golden bodies stay
valid. Regenerate them with RANKLENS_WRITE_GOLDEN=1 pytest tests/test_service.py.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ranklens.dataset import ColumnMapping, ingest_csv, table_to_document
from ranklens.explain import ExplainConfig
from ranklens.pipeline import (
    PipelineConfig,
    RankerSpec,
    run_agreement,
    run_evaluate,
    run_explain,
    run_ingest,
    run_train,
)
from ranklens.store import ArtifactKey, ArtifactStore
from ranklens.synth import fixture_mapping, write_fixture

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_SEED = 11


def write_university_csv(path: Path) -> None:
    rng = np.random.default_rng(0)
    attrs = [f"a{j}" for j in range(10)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "name", "rank", *attrs])
        for year in range(2011, 2017):
            for i in range(818):
                writer.writerow([year, f"u{i:03d}", i + 1,
                                 *[repr(round(float(v), 6)) for v in rng.uniform(0, 100, 10)]])


def build_service_store(root: Path) -> PipelineConfig:
    data_dir = root / "data"
    paths = write_fixture(data_dir, seed=5, n_candidates=30, years=(2011, 2012, 2013))
    config = PipelineConfig(
        dataset_id="synthlin",
        csv_path=str(paths["csv"]),
        mapping=fixture_mapping(),
        store_path=str(root / "store"),
        seed=GOLDEN_SEED,
        rankers=[
            RankerSpec("RankingSVM", "RankingSVM"),
            RankerSpec("MART", "MART", {"trees": 30}),
        ],
        explain=ExplainConfig(n_samples=150),
    )
    run_ingest(config)
    run_train(config)
    run_evaluate(config)
    run_explain(config)
    run_agreement(config)

    uni_csv = data_dir / "university.csv"
    write_university_csv(uni_csv)
    mapping = ColumnMapping(
        year="year", entity="name", rank="rank",
        attributes=tuple(f"a{j}" for j in range(10)),
    )
    table = ingest_csv(uni_csv, mapping, dataset_id="university")
    store = ArtifactStore(config.store_path)
    store.put(ArtifactKey("university", "dataset"), table_to_document(table))
    return config


GOLDEN_REQUESTS = [
    ("datasets", "/datasets"),
    ("synthlin_years", "/datasets/synthlin/years"),
    ("synthlin_attributes", "/datasets/synthlin/attributes"),
    ("synthlin_rankers", "/datasets/synthlin/rankers"),
    ("university_years", "/datasets/university/years"),
    ("university_attributes", "/datasets/university/attributes"),
    ("deviation_mid_range",
     "/deviation?dataset=synthlin&year=2011&rankers=RankingSVM,MART&lo=5&hi=20"),
    ("deviation_filtered",
     "/deviation?dataset=synthlin&year=2011&rankers=RankingSVM,MART&lo=5&hi=20"
     "&filter=capacity:45:60"),
    ("deviation_full_range",
     "/deviation?dataset=synthlin&year=2012&rankers=MART"),
    ("explanations_lime",
     "/explanations?dataset=synthlin&year=2011&rankers=RankingSVM,MART&method=LIME"
     "&lo=1&hi=10"),
    ("explanations_ice_threshold",
     "/explanations?dataset=synthlin&year=2011&rankers=MART&method=ICE&lo=1&hi=15"
     "&threshold=2&average=filtered"),
    ("explanations_ice_all",
     "/explanations?dataset=synthlin&year=2011&rankers=MART&method=ICE&lo=1&hi=15"
     "&threshold=2&average=all"),
    ("correlation_two_rankers",
     "/correlation?dataset=synthlin&year=2012&rankers=RankingSVM,MART&method=LIME"
     "&attribute=quality&lo=1&hi=12"),
    ("agreement_mart", "/agreement?dataset=synthlin&ranker=MART&year=2012"),
    ("compare_ranker_mode",
     "/compare?mode=ranker&dataset=synthlin&year=2011&rankers=RankingSVM,MART"
     "&method=LIME&lo=1&hi=10"),
    ("compare_range_mode",
     "/compare?mode=range&dataset=synthlin&year=2011&ranker=RankingSVM&method=LIME"
     "&lo=1&hi=15&lo2=16&hi2=30"),
    ("compare_time_mode",
     "/compare?mode=time&dataset=synthlin&year=2011&year2=2013&ranker=MART"
     "&method=ICE&lo=1&hi=10"),
    ("compare_ranker_mode_single",
     "/compare?mode=ranker&dataset=synthlin&year=2011&rankers=MART&method=ICE"
     "&lo=1&hi=5"),
]
