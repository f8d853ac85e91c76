"""Ranking tables and the LETOR interchange format.

A published multi-attribute ranking is abstracted into the query/document/label
form used by learning-to-rank: each publication year is one query, each ranked
entity is one document, and the relevance label is derived from the published
rank. The LETOR text format used for interchange is, one line per candidate:

    <label> qid:<query_id> 1:<v1> 2:<v2> ... p:<vp> # <candidate_id>

Lines are grouped by query (ascending query id) and ordered by ascending
ground-truth rank within a query. Attribute values are rendered with ``repr``
so the round trip back through ``from_letor`` is bit-exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError, IngestionError, LetorFormatError, SchemaError

__all__ = [
    "Candidate",
    "QueryGroup",
    "RankingTable",
    "ColumnMapping",
    "ingest_csv",
    "derive_relevance",
    "to_letor",
    "from_letor",
    "split_leave_one_year_out",
]


@dataclass(frozen=True)
class Candidate:
    """One ranked entity within a query group.

    ``source_rank`` keeps the rank string as published (e.g. ``"=44"``) when it
    differs from the resolved integer rank, so tie groups remain recoverable.
    """

    candidate_id: str
    attributes: tuple[float, ...]
    ground_truth_rank: int
    relevance_label: int | None = None
    source_rank: str | None = None


@dataclass(frozen=True)
class QueryGroup:
    query_id: int
    candidates: tuple[Candidate, ...]

    def __post_init__(self) -> None:
        ids = [c.candidate_id for c in self.candidates]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DataError(f"duplicate candidate ids in query {self.query_id}: {dupes}")

    @property
    def size(self) -> int:
        return len(self.candidates)

    def attribute_matrix(self) -> np.ndarray:
        return np.array([c.attributes for c in self.candidates], dtype=np.float64)

    def truth_ranks(self) -> np.ndarray:
        return np.array([c.ground_truth_rank for c in self.candidates], dtype=np.int64)

    def relevance_labels(self) -> np.ndarray:
        labels = [c.relevance_label for c in self.candidates]
        if any(l is None for l in labels):
            raise DataError(
                f"relevance labels not derived for query {self.query_id}; "
                "call derive_relevance first"
            )
        return np.array(labels, dtype=np.int64)

    def candidate_ids(self) -> list[str]:
        return [c.candidate_id for c in self.candidates]


@dataclass(frozen=True)
class RankingTable:
    """Immutable attribute matrix with ground-truth rankings, grouped by query."""

    dataset_id: str
    attribute_names: tuple[str, ...]
    queries: tuple[QueryGroup, ...]

    def __post_init__(self) -> None:
        if len(self.attribute_names) < 1:
            raise DataError("a ranking table needs at least one attribute column")
        if len(self.queries) < 1:
            raise DataError("a ranking table needs at least one query group")
        p = len(self.attribute_names)
        for group in self.queries:
            for cand in group.candidates:
                if len(cand.attributes) != p:
                    raise DataError(
                        f"candidate {cand.candidate_id!r} in query {group.query_id} has "
                        f"{len(cand.attributes)} attributes, expected {p}"
                    )

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_names)

    def query_ids(self) -> list[int]:
        return [g.query_id for g in self.queries]

    def group(self, query_id: int) -> QueryGroup:
        for g in self.queries:
            if g.query_id == query_id:
                return g
        raise DataError(f"query {query_id} not present in dataset {self.dataset_id!r}")

    def stacked_attributes(self) -> np.ndarray:
        """All candidate rows across queries, in table order. Shape (n, p)."""
        return np.vstack([g.attribute_matrix() for g in self.queries])


@dataclass(frozen=True)
class ColumnMapping:
    """Declarative mapping from CSV columns to the ranking-table schema.

    ``query_key_map`` translates non-integer query keys (e.g. season names) to
    integer query ids; integer-like year columns need no map. Columns in
    ``drop`` (e.g. a published total score) are discarded; every remaining
    column not otherwise mapped must be listed in ``attributes``.
    """

    year: str
    entity: str
    rank: str
    attributes: tuple[str, ...]
    drop: tuple[str, ...] = ()
    delimiter: str = ","
    query_key_map: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ColumnMapping":
        try:
            return cls(
                year=raw["year"],
                entity=raw["entity"],
                rank=raw["rank"],
                attributes=tuple(raw["attributes"]),
                drop=tuple(raw.get("drop", ())),
                delimiter=raw.get("delimiter", ","),
                query_key_map={str(k): int(v) for k, v in raw.get("query_key_map", {}).items()},
            )
        except KeyError as e:
            raise SchemaError(f"column mapping is missing required key {e.args[0]!r}") from e


def _parse_rank(raw: str) -> tuple[int, str]:
    """Parse a published rank cell, tolerating tie markers like ``=44``."""
    text = raw.strip()
    cleaned = text.lstrip("=").strip()
    try:
        return int(cleaned), text
    except ValueError:
        raise ValueError(text)


def _query_id_for(key: str, mapping: ColumnMapping) -> int:
    if key in mapping.query_key_map:
        return mapping.query_key_map[key]
    try:
        return int(key)
    except ValueError:
        raise SchemaError(
            f"query key {key!r} is not an integer and has no query_key_map entry"
        ) from None


def ingest_csv(path, schema: ColumnMapping, *, dataset_id: str | None = None) -> RankingTable:
    """Read a published ranking CSV into a RankingTable grouped by year.

    Missing attribute values are a hard error: explanations over imputed
    values would be misleading. Tied published ranks are resolved to distinct
    integers by stable order of appearance; the published rank string is kept
    on the candidate as ``source_rank``.
    """
    path = str(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=schema.delimiter)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, header row required")
        header = set(reader.fieldnames)
        required = [schema.year, schema.entity, schema.rank, *schema.attributes]
        for col in required:
            if col not in header:
                raise SchemaError(f"{path}: column {col!r} not found in header")

        rows_by_query: dict[int, list[tuple[int, int, str, str, tuple[float, ...]]]] = {}
        seen: set[tuple[int, str]] = set()
        for row_index, row in enumerate(reader):
            query_id = _query_id_for(row[schema.year].strip(), schema)
            entity = row[schema.entity].strip()
            key = (query_id, entity)
            if key in seen:
                raise IngestionError(
                    f"{path}: duplicate (year, entity) pair ({query_id}, {entity!r})"
                )
            seen.add(key)
            try:
                rank, source_rank = _parse_rank(row[schema.rank])
            except ValueError as e:
                raise IngestionError(
                    f"{path}: row {row_index}: unparseable rank {e.args[0]!r}"
                ) from None
            values = []
            for col in schema.attributes:
                cell = row[col]
                try:
                    values.append(float(cell))
                except (TypeError, ValueError):
                    raise IngestionError(
                        f"{path}: row {row_index}: non-numeric value {cell!r} "
                        f"in attribute column {col!r}"
                    ) from None
            rows_by_query.setdefault(query_id, []).append(
                (rank, row_index, entity, source_rank, tuple(values))
            )

    if not rows_by_query:
        raise IngestionError(f"{path}: no data rows")

    groups = []
    for query_id in sorted(rows_by_query):
        rows = rows_by_query[query_id]
        # Resolve ties: stable sort on (published rank, order of appearance),
        # then reassign distinct ranks 1..n.
        rows.sort(key=lambda r: (r[0], r[1]))
        candidates = []
        for position, (rank, _, entity, source_rank, values) in enumerate(rows, start=1):
            candidates.append(
                Candidate(
                    candidate_id=entity,
                    attributes=values,
                    ground_truth_rank=position,
                    source_rank=source_rank if source_rank != str(position) else None,
                )
            )
        groups.append(QueryGroup(query_id=query_id, candidates=tuple(candidates)))

    if dataset_id is None:
        dataset_id = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    table = RankingTable(
        dataset_id=dataset_id,
        attribute_names=tuple(schema.attributes),
        queries=tuple(groups),
    )
    return derive_relevance_table(table)


def derive_relevance(group: QueryGroup) -> QueryGroup:
    """Attach LETOR relevance labels: label = n - rank (higher = more relevant)."""
    n = group.size
    ranks = [c.ground_truth_rank for c in group.candidates]
    if sorted(ranks) != list(range(1, n + 1)):
        raise DataError(
            f"ground-truth ranks in query {group.query_id} are not a permutation of 1..{n}; "
            "resolve ties before deriving relevance"
        )
    candidates = tuple(
        replace(c, relevance_label=n - c.ground_truth_rank) for c in group.candidates
    )
    return QueryGroup(query_id=group.query_id, candidates=candidates)


def derive_relevance_table(table: RankingTable) -> RankingTable:
    return replace(table, queries=tuple(derive_relevance(g) for g in table.queries))


def to_letor(table: RankingTable, path) -> None:
    """Write the table in the LETOR interchange format described in the module docstring."""
    if table.n_attributes < 1:
        raise DataError("refusing to write a LETOR file with no attribute columns")
    lines = []
    for group in sorted(table.queries, key=lambda g: g.query_id):
        ordered = sorted(group.candidates, key=lambda c: c.ground_truth_rank)
        for cand in ordered:
            if cand.relevance_label is None:
                raise DataError(
                    f"candidate {cand.candidate_id!r} has no relevance label; "
                    "call derive_relevance first"
                )
            feats = " ".join(f"{j + 1}:{value!r}" for j, value in enumerate(cand.attributes))
            lines.append(
                f"{cand.relevance_label} qid:{group.query_id} {feats} # {cand.candidate_id}\n"
            )
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)


def from_letor(path, *, dataset_id: str | None = None,
               attribute_names: tuple[str, ...] | None = None) -> RankingTable:
    """Read a LETOR file back into a RankingTable.

    Ground-truth ranks are recovered by sorting each query group by descending
    relevance label, ties broken by file order.
    """
    path = str(path)
    rows_by_query: dict[int, list[tuple[int, str, tuple[float, ...]]]] = {}
    order_of_query: list[int] = []
    n_features: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            body, _, comment = line.partition("#")
            parts = body.split()
            if len(parts) < 2 or not parts[1].startswith("qid:"):
                raise LetorFormatError(f"{path}:{line_no}: expected '<label> qid:<id> ...'")
            try:
                label = int(parts[0])
                query_id = int(parts[1][len("qid:"):])
            except ValueError:
                raise LetorFormatError(
                    f"{path}:{line_no}: unparseable label or query id"
                ) from None
            values = []
            for expected_index, token in enumerate(parts[2:], start=1):
                idx_str, _, val_str = token.partition(":")
                try:
                    idx = int(idx_str)
                    value = float(val_str)
                except ValueError:
                    raise LetorFormatError(
                        f"{path}:{line_no}: malformed feature token {token!r}"
                    ) from None
                if idx != expected_index:
                    raise LetorFormatError(
                        f"{path}:{line_no}: non-contiguous feature indices "
                        f"(got {idx}, expected {expected_index})"
                    )
                values.append(value)
            if not values:
                raise LetorFormatError(f"{path}:{line_no}: no feature values")
            if n_features is None:
                n_features = len(values)
            elif len(values) != n_features:
                raise LetorFormatError(
                    f"{path}:{line_no}: expected {n_features} features, got {len(values)}"
                )
            candidate_id = comment.strip()
            if not candidate_id:
                candidate_id = f"q{query_id}-line{line_no}"
            if query_id not in rows_by_query:
                order_of_query.append(query_id)
            rows_by_query.setdefault(query_id, []).append((label, candidate_id, tuple(values)))

    if n_features is None:
        raise LetorFormatError(f"{path}: no data lines")

    groups = []
    for query_id in order_of_query:
        rows = rows_by_query[query_id]
        by_label = sorted(
            range(len(rows)), key=lambda i: (-rows[i][0], i)
        )  # descending label, file order breaks ties
        rank_of = {i: pos + 1 for pos, i in enumerate(by_label)}
        candidates = tuple(
            Candidate(
                candidate_id=rows[i][1],
                attributes=rows[i][2],
                ground_truth_rank=rank_of[i],
                relevance_label=rows[i][0],
            )
            for i in range(len(rows))
        )
        groups.append(QueryGroup(query_id=query_id, candidates=candidates))

    if dataset_id is None:
        dataset_id = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    if attribute_names is None:
        attribute_names = tuple(f"attr_{j + 1}" for j in range(n_features))
    return RankingTable(
        dataset_id=dataset_id, attribute_names=attribute_names, queries=tuple(groups)
    )


def split_leave_one_year_out(table: RankingTable, held_out: int) -> tuple[RankingTable, RankingTable]:
    """Split into (train, test) where test holds exactly the ``held_out`` query."""
    if held_out not in table.query_ids():
        raise DataError(f"query {held_out} not present in dataset {table.dataset_id!r}")
    train_groups = tuple(g for g in table.queries if g.query_id != held_out)
    test_groups = tuple(g for g in table.queries if g.query_id == held_out)
    if not train_groups:
        raise DataError("cannot hold out the only query group: train split would be empty")
    train = replace(table, queries=train_groups)
    test = replace(table, queries=test_groups)
    return train, test


def table_to_document(table: RankingTable) -> dict:
    """Serialize to the versioned document stored and served for a dataset."""
    return {
        "schema": "ranking-table/1",
        "dataset_id": table.dataset_id,
        "attribute_names": list(table.attribute_names),
        "queries": [
            {
                "query_id": g.query_id,
                "candidates": [
                    {
                        "candidate_id": c.candidate_id,
                        "attributes": list(c.attributes),
                        "ground_truth_rank": c.ground_truth_rank,
                        "relevance_label": c.relevance_label,
                        **({"source_rank": c.source_rank} if c.source_rank is not None else {}),
                    }
                    for c in g.candidates
                ],
            }
            for g in table.queries
        ],
    }


def table_from_document(doc: dict) -> RankingTable:
    if doc.get("schema") != "ranking-table/1":
        raise DataError(f"unsupported ranking-table schema {doc.get('schema')!r}")
    groups = tuple(
        QueryGroup(
            query_id=g["query_id"],
            candidates=tuple(
                Candidate(
                    candidate_id=c["candidate_id"],
                    attributes=tuple(c["attributes"]),
                    ground_truth_rank=c["ground_truth_rank"],
                    relevance_label=c.get("relevance_label"),
                    source_rank=c.get("source_rank"),
                )
                for c in g["candidates"]
            ),
        )
        for g in doc["queries"]
    )
    return RankingTable(
        dataset_id=doc["dataset_id"],
        attribute_names=tuple(doc["attribute_names"]),
        queries=groups,
    )
