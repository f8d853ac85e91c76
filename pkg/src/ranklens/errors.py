"""Exception hierarchy.

Every error raised by this package derives from RankLensError so callers
(CLI, service) can map failures to exit codes / HTTP bodies in one place.
"""

from __future__ import annotations


class RankLensError(Exception):
    """Base class for all package errors."""


class ConfigError(RankLensError):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


class DataError(RankLensError):
    """Invalid input data: ingestion, parsing, shape or value problems (CLI exit code 3)."""


class SchemaError(DataError):
    """A declared column mapping does not match the input file."""


class IngestionError(DataError):
    """Row-level ingestion failure (duplicates, unparseable cells)."""


class LetorFormatError(DataError):
    """Malformed LETOR interchange file."""


class TrainingError(RankLensError):
    """A trainer's preconditions are not met or training cannot proceed."""


class ExplainError(RankLensError):
    """An explanation cannot be computed for the requested configuration."""


class MissingArtifactError(RankLensError):
    """A required stored artifact does not exist (CLI exit code 4)."""


class ArtifactFormatError(RankLensError):
    """A stored artifact exists but cannot be decoded (version or schema mismatch)."""
