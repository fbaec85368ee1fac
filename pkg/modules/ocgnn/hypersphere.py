"""Hypersphere centre, percentile radius and anomaly scores."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from modules.autodiff.tensor import Tensor
from utils.errors import ConfigError, DimensionError, ValidationError


logger = logging.getLogger(__name__)

COLLAPSE_VARIANCE = 1e-12


@dataclass(frozen=True, eq=False)
class HypersphereState:
    """Centre ``c`` (fixed after initialisation) and squared radius ``r²``.

    ``radius_sq`` is the exact percentile value chosen by
    :func:`percentile_radius_sq`; ``radius`` is its square root.
    """

    center: np.ndarray
    radius_sq: float = 0.0

    def __post_init__(self) -> None:
        center = np.array(self.center, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(center)):
            raise ValidationError("hypersphere centre must be finite")
        if self.radius_sq < 0.0:
            raise ValidationError("hypersphere radius must be non-negative")
        center.setflags(write=False)
        object.__setattr__(self, "center", center)

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)

    @property
    def width(self) -> int:
        return int(self.center.size)

    def with_radius_sq(self, radius_sq: float) -> "HypersphereState":
        return replace(self, radius_sq=float(radius_sq))


def init_center(z_train) -> np.ndarray:
    """Column-wise mean of the training embeddings."""

    values = z_train.values if isinstance(z_train, Tensor) else np.asarray(z_train, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] == 0:
        raise ValidationError("the centre needs at least one training embedding")
    return values.mean(axis=0)


def percentile_index(count: int, beta: float) -> int:
    """1-based nearest-rank index ``⌈(1 − β)·K⌉``, at least 1."""

    return max(1, math.ceil(round((1.0 - beta) * count, 9)))


def percentile_radius_sq(distances, beta: float) -> float:
    """Nearest-rank ``(1 − β)`` percentile of the squared distances."""

    d = np.asarray(distances, dtype=np.float64).reshape(-1)
    if d.size == 0:
        raise ValidationError("the radius needs at least one training distance")
    if not 0.0 < beta <= 1.0:
        raise ConfigError(f"beta must be in (0, 1], got {beta}")
    if np.any(d < 0):
        raise ValidationError("squared distances must be non-negative")
    ordered = np.sort(d, kind="stable")
    return float(ordered[percentile_index(d.size, beta) - 1])


def update_radius(distances, beta: float) -> float:
    """Return ``r`` with ``r²`` the ``(1 − β)`` percentile; at most ``β·K`` points lie outside."""

    return math.sqrt(percentile_radius_sq(distances, beta))


def squared_distances(z: np.ndarray, center: np.ndarray) -> np.ndarray:
    values = np.asarray(z, dtype=np.float64)
    if values.ndim == 1:
        values = values.reshape(1, -1)
    if values.shape[1] != np.asarray(center).size:
        raise DimensionError(
            f"embedding width {values.shape[1]} != centre width {np.asarray(center).size}"
        )
    diff = values - center
    return np.sum(diff * diff, axis=1)


def anomaly_score(z, sphere: HypersphereState) -> float:
    """``S(v) = ‖z − c‖² − r²``; positive means anomalous."""

    return float(squared_distances(z, sphere.center)[0] - sphere.radius_sq)


def anomaly_scores(z, sphere: HypersphereState) -> np.ndarray:
    return squared_distances(z, sphere.center) - sphere.radius_sq


def warn_if_collapsed(distances: np.ndarray, *, epoch: int) -> bool:
    variance = float(np.var(distances))
    if variance < COLLAPSE_VARIANCE:
        logger.warning(
            "Training distances have collapsed (variance %.3e); embeddings sit on the centre",
            variance,
            extra={"epoch": epoch},
        )
        return True
    return False
