"""Read-only HTTP API over the artifact store.

Serves stored artifacts plus range-scoped computations (normalization,
attribute ordering, agreement) to the exploration UI. No endpoint mutates the
store; bodies are rendered canonically so identical requests return identical
bytes. Rank ranges are always anchored on ground-truth ranks: changing the
selected rankers never changes which candidates are in range.

Configuration comes from arguments, then environment variables
(RANKLENS_STORE, RANKLENS_CACHE_SIZE, RANKLENS_STATIC, RANKLENS_PORT), then an
optional YAML config file named by RANKLENS_CONFIG with keys
{store, cache_size, static, port}.

Error bodies are machine readable: {"code", "message", "detail"}.
"""

from __future__ import annotations

import json
import os
import threading
from collections import OrderedDict
from pathlib import Path

import yaml
from fastapi import FastAPI, Request, Response
from fastapi.middleware.gzip import GZipMiddleware
from fastapi.staticfiles import StaticFiles

from .agreement import AgreementReport
from .dataset import RankingTable, table_from_document
from .errors import RankLensError
from .explain import ExplanationMatrix, attribute_order, normalize_importance
from .metrics import FitReport
from .store import ArtifactKey, ArtifactStore

__all__ = ["create_app", "ApiError", "load_service_settings"]

DEFAULT_CACHE_SIZE = 256


class ApiError(RankLensError):
    def __init__(self, code: str, message: str, detail=None, status: int = 400):
        super().__init__(message)
        self.code = code
        self.message = message
        self.detail = detail
        self.status = status


def _not_found(message: str, detail=None) -> ApiError:
    return ApiError("not_found", message, detail, status=404)


def _bad_request(message: str, detail=None) -> ApiError:
    return ApiError("bad_request", message, detail, status=400)


class _LruCache:
    """Small thread-safe LRU for rendered response bodies."""

    def __init__(self, max_entries: int):
        self.max_entries = max_entries
        self._lock = threading.Lock()
        self._data: OrderedDict[str, bytes] = OrderedDict()

    def get(self, key: str) -> bytes | None:
        with self._lock:
            if key not in self._data:
                return None
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key: str, value: bytes) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.max_entries:
                self._data.popitem(last=False)


def load_service_settings(store_path=None, cache_size=None, static_dir=None,
                          port=None, host=None) -> dict:
    file_cfg = {}
    config_path = os.environ.get("RANKLENS_CONFIG")
    if config_path and Path(config_path).is_file():
        file_cfg = yaml.safe_load(Path(config_path).read_text(encoding="utf-8")) or {}
    return {
        "store": store_path or os.environ.get("RANKLENS_STORE") or file_cfg.get("store"),
        "cache_size": int(
            cache_size
            or os.environ.get("RANKLENS_CACHE_SIZE")
            or file_cfg.get("cache_size")
            or DEFAULT_CACHE_SIZE
        ),
        "static": static_dir or os.environ.get("RANKLENS_STATIC") or file_cfg.get("static"),
        "port": int(port or os.environ.get("RANKLENS_PORT") or file_cfg.get("port") or 8000),
        "host": host or os.environ.get("RANKLENS_HOST") or file_cfg.get("host")
        or "127.0.0.1",
    }


class _Data:
    """Artifact access with parsed-document caching (the store is immutable)."""

    def __init__(self, store: ArtifactStore):
        self.store = store
        self._tables: dict[str, RankingTable] = {}
        self._lock = threading.Lock()

    def table(self, dataset_id: str) -> RankingTable:
        with self._lock:
            if dataset_id in self._tables:
                return self._tables[dataset_id]
        key = ArtifactKey(dataset_id, "dataset")
        if not self.store.exists(key):
            raise _not_found(
                f"unknown dataset {dataset_id!r}",
                {"available": self.store.dataset_ids()},
            )
        table = table_from_document(self.store.get_document(key))
        with self._lock:
            self._tables[dataset_id] = table
        return table

    def fit(self, dataset_id: str, ranker_id: str, year: int) -> FitReport:
        key = ArtifactKey(dataset_id, "fit", ranker_id=ranker_id, query_id=year)
        if not self.store.exists(key):
            raise _not_found(
                f"no fit report for ranker {ranker_id!r}, year {year}",
                {"available_rankers": self.store.ranker_ids(dataset_id)},
            )
        return FitReport.from_document(self.store.get_document(key))

    def explanation(self, dataset_id: str, ranker_id: str, year: int, method: str,
                    seed: int | None) -> ExplanationMatrix:
        if seed is None:
            prefix = f"{dataset_id}/explanation/{ranker_id}/{year}/{method}-seed"
            candidates = [p for p in self.store.list(prefix)]
            if not candidates:
                raise _not_found(
                    f"no {method} explanation for ranker {ranker_id!r}, year {year}",
                    {"available_rankers": self.store.ranker_ids(dataset_id)},
                )
            seed = int(candidates[0][len(prefix):-len(".json")])
        key = ArtifactKey(dataset_id, "explanation", ranker_id=ranker_id,
                          query_id=year, method=method, seed=seed)
        if not self.store.exists(key):
            raise _not_found(
                f"no {method} explanation with seed {seed} for ranker {ranker_id!r}, "
                f"year {year}"
            )
        return ExplanationMatrix.from_document(self.store.get_document(key))

    def agreement(self, dataset_id: str, ranker_id: str, year: int) -> AgreementReport:
        key = ArtifactKey(dataset_id, "agreement", ranker_id=ranker_id, query_id=year)
        if not self.store.exists(key):
            raise _not_found(
                f"no agreement report for ranker {ranker_id!r}, year {year}",
                {"available_rankers": self.store.ranker_ids(dataset_id)},
            )
        return AgreementReport.from_document(self.store.get_document(key))


def _parse_rankers(raw: str | None) -> list[str]:
    if not raw:
        raise _bad_request("at least one ranker is required (rankers=a,b,...)")
    return [r for r in raw.split(",") if r]


def _parse_filters(raw: list[str]) -> list[tuple[str, float, float]]:
    """Attribute filters as repeated filter=name:min:max query parameters."""
    parsed = []
    for item in raw:
        parts = item.split(":")
        if len(parts) != 3:
            raise _bad_request(f"bad filter {item!r}; expected name:min:max")
        try:
            parsed.append((parts[0], float(parts[1]), float(parts[2])))
        except ValueError:
            raise _bad_request(f"bad filter bounds in {item!r}") from None
    return parsed


def _resolve_range(group_size: int, lo: int, hi: int | None) -> tuple[int, int]:
    hi = group_size if hi is None else hi
    if not (1 <= lo <= hi <= group_size):
        raise _bad_request(
            f"rank range ({lo}, {hi}) is empty or outside 1..{group_size}"
        )
    return lo, hi


def create_app(store_path=None, cache_size=None, static_dir=None) -> FastAPI:
    settings = load_service_settings(store_path, cache_size, static_dir)
    if not settings["store"]:
        raise RankLensError(
            "no artifact store configured (argument, RANKLENS_STORE, or config file)"
        )
    data = _Data(ArtifactStore(settings["store"]))
    cache = _LruCache(settings["cache_size"])

    app = FastAPI(title="ranklens service", version="1")
    app.add_middleware(GZipMiddleware, minimum_size=1024)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        body = {"code": exc.code, "message": exc.message, "detail": exc.detail}
        return Response(
            content=json.dumps(body, sort_keys=True),
            status_code=exc.status,
            media_type="application/json",
        )

    @app.exception_handler(RankLensError)
    async def handle_package_error(request: Request, exc: RankLensError):
        body = {"code": "internal", "message": str(exc), "detail": None}
        return Response(
            content=json.dumps(body, sort_keys=True),
            status_code=500,
            media_type="application/json",
        )

    def respond(request: Request, build) -> Response:
        cache_key = f"{request.url.path}?{request.url.query}"
        cached = cache.get(cache_key)
        if cached is None:
            payload = build()
            cached = json.dumps(payload, sort_keys=True).encode("utf-8")
            cache.put(cache_key, cached)
        return Response(content=cached, media_type="application/json")

    # -- payload builders ---------------------------------------------------

    def _group(table: RankingTable, year: int):
        try:
            return table.group(year)
        except RankLensError as e:
            raise _not_found(str(e), {"available": table.query_ids()}) from None

    def deviation_rows(dataset: str, year: int, rankers: list[str],
                       lo: int, hi: int, filters) -> list[dict]:
        table = data.table(dataset)
        group = table.group(year)
        reports = {rid: data.fit(dataset, rid, year) for rid in rankers}
        deviation_of = {
            rid: dict(zip(report.candidate_ids, report.deviations))
            for rid, report in reports.items()
        }
        name_to_col = {name: j for j, name in enumerate(table.attribute_names)}
        for name, _, _ in filters:
            if name not in name_to_col:
                raise _bad_request(
                    f"unknown attribute {name!r}",
                    {"available": list(table.attribute_names)},
                )
        rows = []
        for cand in group.candidates:
            if not lo <= cand.ground_truth_rank <= hi:
                continue
            if any(
                not (low <= cand.attributes[name_to_col[name]] <= high)
                for name, low, high in filters
            ):
                continue
            rows.append({
                "candidate_id": cand.candidate_id,
                "truth_rank": cand.ground_truth_rank,
                "color_index": cand.ground_truth_rank - lo,
                "deviations": {rid: deviation_of[rid][cand.candidate_id] for rid in rankers},
            })
        rows.sort(key=lambda r: r["truth_rank"])
        return rows

    def explanation_payload(dataset: str, year: int, ranker_id: str, method: str,
                            lo: int, hi: int, seed: int | None,
                            threshold: int | None, average: str) -> dict:
        table = data.table(dataset)
        matrix = data.explanation(dataset, ranker_id, year, method, seed)
        norm = normalize_importance(matrix, (lo, hi))
        order = attribute_order(norm)
        report = data.fit(dataset, ranker_id, year)
        deviation_of = dict(zip(report.candidate_ids, report.deviations))
        rows = []
        for i, cand_id in enumerate(norm.candidate_ids):
            d = deviation_of[cand_id]
            rows.append({
                "candidate_id": cand_id,
                "truth_rank": norm.truth_ranks[i],
                "color_index": norm.truth_ranks[i] - lo,
                "deviation": d,
                "dot_size": 1.0 / (1.0 + d),
                "values": {
                    name: norm.values[i, j]
                    for j, name in enumerate(matrix.attribute_names)
                },
            })
        if average == "all" or threshold is None:
            kept = list(range(len(rows)))
        else:
            kept = [i for i, row in enumerate(rows) if row["deviation"] <= threshold]
        if kept:
            means = {
                name: float(sum(norm.values[i, j] for i in kept) / len(kept))
                for j, name in enumerate(matrix.attribute_names)
            }
        else:
            means = {}
        return {
            "ranker_id": ranker_id,
            "method": matrix.method,
            "seed": matrix.seed,
            "attribute_order": [matrix.attribute_names[j] for j in order],
            "attribute_means": means,
            "rows": rows,
        }

    # -- endpoints -----------------------------------------------------------

    @app.get("/datasets")
    def get_datasets(request: Request):
        return respond(request, lambda: {"datasets": data.store.dataset_ids()})

    @app.get("/datasets/{dataset_id}/years")
    def get_years(request: Request, dataset_id: str):
        def build():
            table = data.table(dataset_id)
            return {"dataset": dataset_id, "years": table.query_ids()}
        return respond(request, build)

    @app.get("/datasets/{dataset_id}/attributes")
    def get_attributes(request: Request, dataset_id: str):
        def build():
            table = data.table(dataset_id)
            return {"dataset": dataset_id, "attributes": list(table.attribute_names)}
        return respond(request, build)

    @app.get("/datasets/{dataset_id}/rankers")
    def get_rankers(request: Request, dataset_id: str):
        def build():
            data.table(dataset_id)
            return {"dataset": dataset_id, "rankers": data.store.ranker_ids(dataset_id)}
        return respond(request, build)

    @app.get("/deviation")
    def get_deviation(request: Request, dataset: str, year: int, rankers: str,
                      lo: int = 1, hi: int | None = None):
        def build():
            ranker_list = _parse_rankers(rankers)
            table = data.table(dataset)
            lo_r, hi_r = _resolve_range(_group(table, year).size, lo, hi)
            filters = _parse_filters(request.query_params.getlist("filter"))
            return {
                "dataset": dataset,
                "year": year,
                "range": [lo_r, hi_r],
                "rankers": ranker_list,
                "rows": deviation_rows(dataset, year, ranker_list, lo_r, hi_r, filters),
            }
        return respond(request, build)

    @app.get("/explanations")
    def get_explanations(request: Request, dataset: str, year: int, rankers: str,
                         method: str = "LIME", lo: int = 1, hi: int | None = None,
                         seed: int | None = None, threshold: int | None = None,
                         average: str = "filtered"):
        def build():
            ranker_list = _parse_rankers(rankers)
            if method not in ("LIME", "ICE"):
                raise _bad_request(f"unknown method {method!r}; expected LIME or ICE")
            if average not in ("filtered", "all"):
                raise _bad_request(f"unknown average scope {average!r}")
            table = data.table(dataset)
            lo_r, hi_r = _resolve_range(_group(table, year).size, lo, hi)
            return {
                "dataset": dataset,
                "year": year,
                "method": method,
                "range": [lo_r, hi_r],
                "rankers": [
                    explanation_payload(dataset, year, rid, method, lo_r, hi_r,
                                        seed, threshold, average)
                    for rid in ranker_list
                ],
            }
        return respond(request, build)

    @app.get("/correlation")
    def get_correlation(request: Request, dataset: str, year: int, rankers: str,
                        attribute: str, method: str = "LIME", lo: int = 1,
                        hi: int | None = None, seed: int | None = None):
        def build():
            ranker_list = _parse_rankers(rankers)
            table = data.table(dataset)
            if attribute not in table.attribute_names:
                raise _bad_request(
                    f"unknown attribute {attribute!r}",
                    {"available": list(table.attribute_names)},
                )
            col = table.attribute_names.index(attribute)
            group = _group(table, year)
            lo_r, hi_r = _resolve_range(group.size, lo, hi)
            value_of = {
                c.candidate_id: c.attributes[col] for c in group.candidates
            }
            points = []
            for rid in ranker_list:
                payload = explanation_payload(dataset, year, rid, method, lo_r, hi_r,
                                              seed, None, "all")
                for row in payload["rows"]:
                    points.append({
                        "candidate_id": row["candidate_id"],
                        "truth_rank": row["truth_rank"],
                        "deviation": row["deviation"],
                        "ranker_id": rid,
                        "importance": row["values"][attribute],
                        "attribute_value": value_of[row["candidate_id"]],
                        "dot_size": row["dot_size"],
                    })
            return {
                "dataset": dataset,
                "year": year,
                "attribute": attribute,
                "method": method,
                "range": [lo_r, hi_r],
                "points": points,
            }
        return respond(request, build)

    @app.get("/agreement")
    def get_agreement(request: Request, dataset: str, ranker: str, year: int):
        def build():
            data.table(dataset)
            report = data.agreement(dataset, ranker, year)
            return report.to_document()
        return respond(request, build)

    @app.get("/compare")
    def get_compare(request: Request, mode: str, dataset: str, method: str = "LIME",
                    rankers: str | None = None, ranker: str | None = None,
                    year: int | None = None, year2: int | None = None,
                    lo: int = 1, hi: int | None = None,
                    lo2: int | None = None, hi2: int | None = None,
                    seed: int | None = None):
        def group_payload(rids: list[str], y: int, lo_r: int, hi_r: int, label: str):
            return {
                "key": label,
                "year": y,
                "range": [lo_r, hi_r],
                "deviation": deviation_rows(dataset, y, rids, lo_r, hi_r, []),
                "explanations": [
                    explanation_payload(dataset, y, rid, method, lo_r, hi_r,
                                        seed, None, "all")
                    for rid in rids
                ],
            }

        def build():
            table = data.table(dataset)
            if mode == "ranker":
                if year is None or rankers is None:
                    raise _bad_request("ranker mode needs year and rankers")
                ranker_list = _parse_rankers(rankers)
                lo_r, hi_r = _resolve_range(_group(table, year).size, lo, hi)
                groups = [
                    group_payload([rid], year, lo_r, hi_r, rid) for rid in ranker_list
                ]
            elif mode == "range":
                if year is None or ranker is None or lo2 is None or hi2 is None:
                    raise _bad_request("range mode needs year, ranker, lo2 and hi2")
                size = _group(table, year).size
                lo_a, hi_a = _resolve_range(size, lo, hi)
                lo_b, hi_b = _resolve_range(size, lo2, hi2)
                groups = [
                    group_payload([ranker], year, lo_a, hi_a, f"{lo_a}-{hi_a}"),
                    group_payload([ranker], year, lo_b, hi_b, f"{lo_b}-{hi_b}"),
                ]
            elif mode == "time":
                if year is None or year2 is None or ranker is None:
                    raise _bad_request("time mode needs ranker, year and year2")
                lo_a, hi_a = _resolve_range(_group(table, year).size, lo, hi)
                lo_b, hi_b = _resolve_range(_group(table, year2).size, lo, hi)
                groups = [
                    group_payload([ranker], year, lo_a, hi_a, str(year)),
                    group_payload([ranker], year2, lo_b, hi_b, str(year2)),
                ]
            else:
                raise _bad_request(
                    f"unknown mode {mode!r}; expected ranker, range or time"
                )
            return {"dataset": dataset, "mode": mode, "method": method, "groups": groups}
        return respond(request, build)

    if settings["static"] and Path(settings["static"]).is_dir():
        app.mount("/ui", StaticFiles(directory=settings["static"], html=True), name="ui")

    return app
