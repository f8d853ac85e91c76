"""Model artifact serialization.

A fitted ranker is stored as one self-describing JSON text document with file
extension ``.ranker``: schema tag, algorithm, hyperparameters, seed,
standardization statistics and the learned parameters. Floats are rendered
with shortest round-trip ``repr``, so a reloaded model scores bit-for-bit
identically.
"""

from __future__ import annotations

import json

from ..errors import ArtifactFormatError
from .base import BaseRanker
from .boosting import RankBoost
from .linear import CoordinateAscent, ListNet, RankingSVM
from .trees import MART, LambdaMART

__all__ = ["ALGORITHMS", "make_ranker", "save_ranker", "load_ranker",
           "ranker_to_text", "ranker_from_text"]

ALGORITHMS: dict[str, type[BaseRanker]] = {
    cls.algorithm: cls
    for cls in (MART, LambdaMART, RankBoost, RankingSVM, CoordinateAscent, ListNet)
}


def make_ranker(algorithm: str, *, seed: int = 0, ranker_id: str | None = None,
                **hyperparameters) -> BaseRanker:
    if algorithm not in ALGORITHMS:
        raise ArtifactFormatError(
            f"unknown algorithm {algorithm!r}; available: {sorted(ALGORITHMS)}"
        )
    return ALGORITHMS[algorithm](seed=seed, ranker_id=ranker_id, **hyperparameters)


def ranker_to_text(ranker: BaseRanker) -> str:
    return json.dumps(ranker.to_document(), sort_keys=True, indent=1) + "\n"


def ranker_from_text(text: str) -> BaseRanker:
    doc = json.loads(text)
    if doc.get("schema") != "ranker/1":
        raise ArtifactFormatError(
            f"unsupported ranker artifact version {doc.get('schema')!r}, expected 'ranker/1'"
        )
    algorithm = doc.get("algorithm")
    if algorithm not in ALGORITHMS:
        raise ArtifactFormatError(f"unknown algorithm {algorithm!r} in ranker artifact")
    return ALGORITHMS[algorithm].from_document(doc)


def save_ranker(ranker: BaseRanker, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ranker_to_text(ranker))


def load_ranker(path) -> BaseRanker:
    with open(path, "r", encoding="utf-8") as fh:
        return ranker_from_text(fh.read())
