"""Input validation helpers shared by estimators, metrics and explainers."""

from __future__ import annotations

import numpy as np

from .errors import DataError


def check_matrix(X, *, expected_columns: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a 2-D float64 array and optionally enforce a column count."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise DataError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if expected_columns is not None and X.shape[1] != expected_columns:
        raise DataError(
            f"{name} has {X.shape[1]} attribute columns, expected {expected_columns}"
        )
    return X


def check_vector(v, *, length: int | None = None, name: str = "v") -> np.ndarray:
    """Coerce ``v`` to a 1-D float64 array and optionally enforce a length."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got ndim={v.ndim}")
    if length is not None and v.shape[0] != length:
        raise DataError(f"{name} has length {v.shape[0]}, expected {length}")
    return v


def check_rank_vector(ranks, *, name: str = "ranks") -> np.ndarray:
    """Validate that ``ranks`` is a permutation of 1..n and return it as int64."""
    arr = np.asarray(ranks)
    if arr.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got ndim={arr.ndim}")
    if arr.size == 0:
        raise DataError(f"{name} is empty")
    as_int = arr.astype(np.int64)
    if not np.array_equal(as_int, np.asarray(arr, dtype=np.float64)):
        raise DataError(f"{name} contains non-integer entries")
    if not np.array_equal(np.sort(as_int), np.arange(1, as_int.size + 1)):
        raise DataError(f"{name} is not a permutation of 1..{as_int.size}")
    return as_int


def check_same_length(a, b, *, names: tuple[str, str] = ("a", "b")) -> None:
    if len(a) != len(b):
        raise DataError(
            f"{names[0]} and {names[1]} must have equal length, got {len(a)} and {len(b)}"
        )
