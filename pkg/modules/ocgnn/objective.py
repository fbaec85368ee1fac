"""The one-class hypersphere objective.

    L(r, W) = 1/(βK) · Σ_i [‖z_i − c‖² − r²]⁺  +  r²  +  (λ/2) · Σ_l ‖W^(l)‖²

``r`` and ``c`` are constants while the weights are updated.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from modules.autodiff import ops
from modules.autodiff.tensor import Tape, Tensor
from modules.layers.weights import EncoderWeights
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.hypersphere import HypersphereState
from utils.errors import DimensionError


def ocgnn_loss(
    tape: Tape,
    z_train: Tensor,
    sphere: HypersphereState,
    config: TrainConfig,
    weights: Optional[EncoderWeights] = None,
) -> Tensor:
    if z_train.shape[1] != sphere.width:
        raise DimensionError(
            f"embedding width {z_train.shape[1]} != centre width {sphere.width}"
        )
    count = z_train.shape[0]
    if count == 0:
        raise DimensionError("the objective needs at least one training embedding")

    distances = ops.sq_dist_to_center(tape, z_train, sphere.center)
    excess = ops.hinge(tape, ops.add_scalar(tape, distances, -sphere.radius_sq))
    loss = ops.add_scalar(
        tape,
        ops.scale(tape, ops.total(tape, excess), 1.0 / (config.beta * count)),
        sphere.radius_sq,
    )
    if weights is not None and config.weight_decay > 0.0:
        penalties = [ops.squared_norm(tape, tensor) for tensor in weights.decayed()]
        regulariser = penalties[0]
        for penalty in penalties[1:]:
            regulariser = ops.add(tape, regulariser, penalty)
        loss = ops.add(tape, loss, ops.scale(tape, regulariser, config.weight_decay / 2.0))
    return loss


def objective_value(
    distances: np.ndarray,
    radius_sq: float,
    beta: float,
    *,
    regulariser: float = 0.0,
    weight_decay: float = 0.0,
) -> float:
    """Evaluate the objective on plain arrays (no tape)."""

    d = np.asarray(distances, dtype=np.float64).reshape(-1)
    if d.size == 0:
        return float("nan")
    hinge = np.maximum(d - radius_sq, 0.0)
    return float(np.sum(hinge) / (beta * d.size) + radius_sq + weight_decay / 2.0 * regulariser)


def weight_penalty(weights: EncoderWeights) -> float:
    return float(sum(np.sum(tensor.values * tensor.values) for tensor in weights.decayed()))
