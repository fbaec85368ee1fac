"""Exception hierarchy shared by every ocgraph module.

Each exception carries the process exit code the command line reports when the
error escapes a subcommand: ``1`` for runtime and numeric failures, ``2`` for
usage and validation problems.
"""

from __future__ import annotations

from typing import Optional


class OcgraphError(Exception):
    """Base class for all errors raised by the engine."""

    exit_code: int = 1


class ValidationError(OcgraphError):
    """Inputs violate a documented contract."""

    exit_code = 2


class GraphFormatError(ValidationError):
    """A graph input file could not be parsed."""

    def __init__(self, path: str, line: Optional[int], message: str) -> None:
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")


class GraphValidationError(ValidationError):
    """A parsed graph violates a structural invariant."""


class SplitCapacityError(ValidationError):
    """Not enough anomalous nodes to balance the evaluation sets."""


class ConfigError(ValidationError):
    """A configuration value is out of range or inconsistent."""


class CheckpointError(ValidationError):
    """A checkpoint file is corrupt, truncated or from another format version."""


class DimensionError(OcgraphError):
    """Operand shapes do not agree."""


class TapeError(OcgraphError):
    """The gradient tape was used out of order."""


class TrainingDivergedError(OcgraphError):
    """The objective became non-finite during training."""


class MetricError(OcgraphError):
    """A metric is undefined for the given input."""


__all__ = [
    "OcgraphError",
    "ValidationError",
    "GraphFormatError",
    "GraphValidationError",
    "SplitCapacityError",
    "ConfigError",
    "CheckpointError",
    "DimensionError",
    "TapeError",
    "TrainingDivergedError",
    "MetricError",
]
