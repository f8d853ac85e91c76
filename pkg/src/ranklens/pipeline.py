"""Pipeline configuration and the ingest/train/evaluate/explain/agreement stages.

Every stage reads its inputs from the artifact store and writes its outputs
back, so the exploration service can be pointed at the store post-hoc. Stages
are idempotent given a fixed seed: rerunning one replaces artifacts with
byte-identical content.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .agreement import agreement_report
from .dataset import ColumnMapping, RankingTable, ingest_csv, table_from_document, table_to_document
from .errors import ConfigError, MissingArtifactError
from .explain import ExplainConfig, ExplanationMatrix, explain_range
from .metrics import FitReport, fit_report
from .rankers import make_ranker, learned_ranking, ranker_to_text
from .store import ArtifactKey, ArtifactStore

__all__ = [
    "RankerSpec",
    "PipelineConfig",
    "load_config",
    "run_ingest",
    "run_train",
    "run_evaluate",
    "run_explain",
    "run_agreement",
    "render_report",
]

METHODS = ("LIME", "ICE")


@dataclass(frozen=True)
class RankerSpec:
    algorithm: str
    ranker_id: str
    hyperparameters: dict = field(default_factory=dict)


@dataclass
class PipelineConfig:
    dataset_id: str
    csv_path: str
    mapping: ColumnMapping
    store_path: str
    seed: int
    rankers: list[RankerSpec]
    years: list[int] | None = None
    explain: ExplainConfig = field(default_factory=ExplainConfig)
    methods: tuple[str, ...] = METHODS

    def store(self) -> ArtifactStore:
        return ArtifactStore(self.store_path)


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    """Read a pipeline config file; ``overrides`` (CLI flags) win over the file."""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML: {e}") from None

    dataset = raw.get("dataset") or {}
    if "dataset" in overrides:
        dataset = {**dataset, "id": overrides["dataset"]}
    dataset_id = dataset.get("id")
    csv_path = dataset.get("csv")
    if not dataset_id:
        raise ConfigError("config is missing dataset.id")
    mapping_raw = dataset.get("mapping")
    if not mapping_raw:
        raise ConfigError("config is missing dataset.mapping")
    mapping = ColumnMapping.from_dict(mapping_raw)

    seed = overrides.get("seed", raw.get("seed"))
    if seed is None:
        raise ConfigError("a seed is mandatory (config key 'seed' or --seed)")

    store_path = overrides.get("store", raw.get("store"))
    if not store_path:
        raise ConfigError("config is missing the store path (key 'store' or --store)")

    years = overrides.get("years", raw.get("years"))
    if years is not None:
        years = [int(y) for y in years]

    ranker_specs = []
    raw_rankers = raw.get("rankers") or []
    if "rankers" in overrides:
        wanted = list(overrides["rankers"])
        by_algorithm = {r.get("algorithm"): r for r in raw_rankers}
        raw_rankers = [by_algorithm.get(name, {"algorithm": name}) for name in wanted]
    if not raw_rankers:
        raise ConfigError("no rankers configured (config key 'rankers' or --rankers)")
    for entry in raw_rankers:
        algorithm = entry.get("algorithm")
        if not algorithm:
            raise ConfigError("every rankers[] entry needs an 'algorithm'")
        ranker_specs.append(
            RankerSpec(
                algorithm=algorithm,
                ranker_id=entry.get("id", algorithm),
                hyperparameters=dict(entry.get("hyperparameters", {})),
            )
        )

    explain_raw = raw.get("explain") or {}
    explain_cfg = ExplainConfig(
        n_samples=int(explain_raw.get("n_samples", 500)),
        kernel_width=explain_raw.get("kernel_width"),
        ridge=float(explain_raw.get("ridge", 1e-3)),
        grid_size=int(explain_raw.get("grid_size", 10)),
    )

    methods = tuple(overrides.get("method") and [overrides["method"]]
                    or explain_raw.get("methods", METHODS))
    for method in methods:
        if method not in METHODS:
            raise ConfigError(f"unknown explanation method {method!r}")

    if csv_path and not Path(csv_path).is_file():
        raise ConfigError(f"dataset csv not found: {csv_path}")

    return PipelineConfig(
        dataset_id=dataset_id,
        csv_path=csv_path,
        mapping=mapping,
        store_path=str(store_path),
        seed=int(seed),
        rankers=ranker_specs,
        years=years,
        explain=explain_cfg,
        methods=methods,
    )


def _load_table(config: PipelineConfig, store: ArtifactStore) -> RankingTable:
    key = ArtifactKey(config.dataset_id, "dataset")
    if not store.exists(key):
        raise MissingArtifactError(
            f"dataset artifact {key.relative_path()} not found; run `ranklens ingest` first"
        )
    return table_from_document(store.get_document(key))


def _selected_years(config: PipelineConfig, table: RankingTable) -> list[int]:
    if config.years is None:
        return table.query_ids()
    available = set(table.query_ids())
    missing = [y for y in config.years if y not in available]
    if missing:
        raise MissingArtifactError(
            f"years {missing} not present in dataset {config.dataset_id!r}"
        )
    return list(config.years)


def _load_ranker(config: PipelineConfig, store: ArtifactStore, ranker_id: str):
    from .rankers.io import ranker_from_text

    key = ArtifactKey(config.dataset_id, "ranker", ranker_id=ranker_id)
    if not store.exists(key):
        raise MissingArtifactError(
            f"ranker artifact {key.relative_path()} not found; run `ranklens train` first"
        )
    return ranker_from_text(store.get_bytes(key).decode("utf-8"))


def run_ingest(config: PipelineConfig) -> RankingTable:
    if not config.csv_path:
        raise ConfigError("config is missing dataset.csv")
    table = ingest_csv(config.csv_path, config.mapping, dataset_id=config.dataset_id)
    store = config.store()
    store.put(ArtifactKey(config.dataset_id, "dataset"), table_to_document(table))
    return table


def run_train(config: PipelineConfig) -> list[str]:
    store = config.store()
    table = _load_table(config, store)
    years = _selected_years(config, table)
    subset = RankingTable(
        dataset_id=table.dataset_id,
        attribute_names=table.attribute_names,
        queries=tuple(g for g in table.queries if g.query_id in years),
    )
    trained = []
    for spec in config.rankers:
        ranker = make_ranker(
            spec.algorithm, seed=config.seed, ranker_id=spec.ranker_id,
            **spec.hyperparameters,
        )
        ranker.fit(subset)
        store.put(
            ArtifactKey(config.dataset_id, "ranker", ranker_id=spec.ranker_id),
            ranker_to_text(ranker),
        )
        trained.append(spec.ranker_id)
    return trained


def run_evaluate(config: PipelineConfig) -> int:
    store = config.store()
    table = _load_table(config, store)
    years = _selected_years(config, table)
    written = 0
    for spec in config.rankers:
        ranker = _load_ranker(config, store, spec.ranker_id)
        for year in years:
            group = table.group(year)
            ranking = learned_ranking(ranker, group)
            store.put(
                ArtifactKey(config.dataset_id, "ranking",
                            ranker_id=spec.ranker_id, query_id=year),
                ranking.to_document(),
            )
            report = fit_report(
                spec.ranker_id, year, group.candidate_ids(), group.truth_ranks(),
                ranking.proxy_ranks, group.relevance_labels(),
            )
            store.put(
                ArtifactKey(config.dataset_id, "fit",
                            ranker_id=spec.ranker_id, query_id=year),
                report.to_document(),
            )
            written += 2
    return written


def run_explain(config: PipelineConfig) -> int:
    store = config.store()
    table = _load_table(config, store)
    years = _selected_years(config, table)
    written = 0
    for spec in config.rankers:
        ranker = _load_ranker(config, store, spec.ranker_id)
        for year in years:
            group = table.group(year)
            for method in config.methods:
                matrix = explain_range(
                    ranker, group, method, (1, group.size), table,
                    cfg=config.explain, seed=config.seed,
                )
                store.put(
                    ArtifactKey(config.dataset_id, "explanation",
                                ranker_id=spec.ranker_id, query_id=year,
                                method=method, seed=config.seed),
                    matrix.to_document(),
                )
                written += 1
    return written


def run_agreement(config: PipelineConfig) -> int:
    store = config.store()
    table = _load_table(config, store)
    years = _selected_years(config, table)
    written = 0
    for spec in config.rankers:
        for year in years:
            matrices = {}
            for method in METHODS:
                key = ArtifactKey(config.dataset_id, "explanation",
                                  ranker_id=spec.ranker_id, query_id=year,
                                  method=method, seed=config.seed)
                if not store.exists(key):
                    raise MissingArtifactError(
                        f"explanation artifact {key.relative_path()} not found; "
                        "run `ranklens explain` (both methods) first"
                    )
                matrices[method] = ExplanationMatrix.from_document(store.get_document(key))
            report = agreement_report(matrices["LIME"], matrices["ICE"])
            store.put(
                ArtifactKey(config.dataset_id, "agreement",
                            ranker_id=spec.ranker_id, query_id=year),
                report.to_document(),
            )
            written += 1
    return written


def render_report(config: PipelineConfig) -> str:
    """Ranker x {NDCG@10, P@10} table (means over years) plus agreement medians."""
    store = config.store()
    table = _load_table(config, store)
    years = _selected_years(config, table)
    lines = [f"dataset: {config.dataset_id}", "", "ranker NDCG@10 P@10"]
    name_width = max(len(s.ranker_id) for s in config.rankers)
    rows = []
    medians = []
    for spec in config.rankers:
        ndcgs, precisions = [], []
        for year in years:
            key = ArtifactKey(config.dataset_id, "fit",
                              ranker_id=spec.ranker_id, query_id=year)
            if not store.exists(key):
                raise MissingArtifactError(
                    f"fit artifact {key.relative_path()} not found; "
                    "run `ranklens evaluate` first"
                )
            report = FitReport.from_document(store.get_document(key))
            ndcgs.append(report.ndcg_at_10)
            precisions.append(report.precision_at_10)
        rows.append(
            f"{spec.ranker_id:<{name_width}} "
            f"{sum(ndcgs) / len(ndcgs):.2f} {sum(precisions) / len(precisions):.2f}"
        )
        year_medians = []
        for year in years:
            key = ArtifactKey(config.dataset_id, "agreement",
                              ranker_id=spec.ranker_id, query_id=year)
            if store.exists(key):
                median = store.get_document(key).get("median")
                if median is not None:
                    year_medians.append(median)
        if year_medians:
            medians.append(
                f"{spec.ranker_id:<{name_width}} "
                f"{sum(year_medians) / len(year_medians):.2f}"
            )
    lines[2] = f"{'ranker':<{name_width}} NDCG@10 P@10"
    lines.extend(rows)
    if medians:
        lines.append("")
        lines.append(f"{'ranker':<{name_width}} median LIME-ICE agreement")
        lines.extend(medians)
    return "\n".join(lines) + "\n"
