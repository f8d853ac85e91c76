"""Filesystem artifact store.

All pipeline artifacts are plain text documents in a flat directory-per-kind
layout, so they stay diffable and versionable:

    <root>/<dataset>/dataset/table.json
    <root>/<dataset>/ranker/<ranker_id>.ranker
    <root>/<dataset>/ranking/<ranker_id>/<query_id>.json
    <root>/<dataset>/fit/<ranker_id>/<query_id>.json
    <root>/<dataset>/explanation/<ranker_id>/<query_id>/<method>-seed<seed>.json
    <root>/<dataset>/agreement/<ranker_id>/<query_id>.json

Keys are pure functions of content identity (never timestamps); writes are
atomic (temp file + rename in the same directory) so a reader sees the old or
the new content, never a partial file. JSON documents are rendered
canonically (sorted keys, fixed indentation), so identical inputs produce
byte-identical artifacts.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import ArtifactFormatError, MissingArtifactError

__all__ = ["ArtifactKey", "ArtifactStore", "canonical_json"]

KINDS = ("dataset", "ranker", "ranking", "fit", "explanation", "agreement")


def canonical_json(document: dict) -> bytes:
    return (json.dumps(document, sort_keys=True, indent=1) + "\n").encode("utf-8")


@dataclass(frozen=True)
class ArtifactKey:
    dataset_id: str
    kind: str
    ranker_id: str | None = None
    query_id: int | None = None
    method: str | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ArtifactFormatError(f"unknown artifact kind {self.kind!r}")
        needs = {
            "dataset": (),
            "ranker": ("ranker_id",),
            "ranking": ("ranker_id", "query_id"),
            "fit": ("ranker_id", "query_id"),
            "explanation": ("ranker_id", "query_id", "method", "seed"),
            "agreement": ("ranker_id", "query_id"),
        }[self.kind]
        for field_name in needs:
            if getattr(self, field_name) is None:
                raise ArtifactFormatError(
                    f"artifact kind {self.kind!r} requires {field_name}"
                )

    def relative_path(self) -> str:
        ds = self.dataset_id
        if self.kind == "dataset":
            return f"{ds}/dataset/table.json"
        if self.kind == "ranker":
            return f"{ds}/ranker/{self.ranker_id}.ranker"
        if self.kind == "explanation":
            return (
                f"{ds}/explanation/{self.ranker_id}/{self.query_id}/"
                f"{self.method}-seed{self.seed}.json"
            )
        return f"{ds}/{self.kind}/{self.ranker_id}/{self.query_id}.json"


class ArtifactStore:
    """Many concurrent readers, single writer per key, atomic replacement."""

    def __init__(self, root) -> None:
        self.root = Path(root)

    def path_for(self, key: ArtifactKey) -> Path:
        return self.root / key.relative_path()

    def exists(self, key: ArtifactKey) -> bool:
        return self.path_for(key).is_file()

    def put(self, key: ArtifactKey, content: bytes | str | dict) -> None:
        if isinstance(content, dict):
            content = canonical_json(content)
        elif isinstance(content, str):
            content = content.encode("utf-8")
        target = self.path_for(key)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=target.parent)
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(content)
            os.replace(tmp_path, target)
        except BaseException:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
            raise

    def get_bytes(self, key: ArtifactKey) -> bytes:
        target = self.path_for(key)
        if not target.is_file():
            raise MissingArtifactError(f"artifact not found: {key.relative_path()}")
        return target.read_bytes()

    def get_document(self, key: ArtifactKey) -> dict:
        raw = self.get_bytes(key)
        try:
            return json.loads(raw.decode("utf-8"))
        except ValueError as e:
            raise ArtifactFormatError(
                f"artifact {key.relative_path()} is not valid JSON: {e}"
            ) from e

    def list(self, prefix: str = "") -> list[str]:
        """Relative paths of stored artifacts under ``prefix``, sorted."""
        if not self.root.is_dir():
            return []
        found = []
        for path in self.root.rglob("*"):
            if not path.is_file() or path.name.startswith(".tmp-"):
                continue
            rel = path.relative_to(self.root).as_posix()
            if rel.startswith(prefix):
                found.append(rel)
        return sorted(found)

    # -- enumeration helpers used by the service ---------------------------

    def dataset_ids(self) -> list[str]:
        if not self.root.is_dir():
            return []
        ids = [
            d.name for d in self.root.iterdir()
            if (d / "dataset" / "table.json").is_file()
        ]
        return sorted(ids)

    def ranker_ids(self, dataset_id: str) -> list[str]:
        base = self.root / dataset_id / "ranker"
        if not base.is_dir():
            return []
        return sorted(p.stem for p in base.glob("*.ranker"))
