"""Versioned JSON checkpoints.

Floats are written with ``repr`` precision, so a save/load round trip
reproduces every weight bit for bit. The file carries no timestamps; equal
models produce identical bytes.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from modules.layers.specs import LayerSpec, validate_specs
from modules.layers.weights import init_weights
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.hypersphere import HypersphereState
from modules.ocgnn.trainer import EpochRecord, OcgnnModel
from utils.errors import CheckpointError, ConfigError, OcgraphError


logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "ocgraph-checkpoint"
CHECKPOINT_VERSION = 1


def model_to_dict(model: OcgnnModel) -> Dict[str, Any]:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "specs": [spec.to_dict() for spec in model.specs],
        "weights": {name: values.tolist() for name, values in model.weights.state().items()},
        "center": model.sphere.center.tolist(),
        "radius": model.sphere.radius,
        "radius_sq": model.sphere.radius_sq,
        "config": model.config.to_dict(),
        "best_epoch": model.best_epoch,
        "best_val_auc": None if math.isnan(model.best_val_auc) else model.best_val_auc,
        "history": [
            [record.epoch, record.loss, record.val_loss, record.val_auc, record.radius]
            for record in model.history
        ],
    }


def save_model(model: OcgnnModel, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(model_to_dict(model), sort_keys=True, allow_nan=True)
    target.write_text(text + "\n", encoding="utf-8")
    logger.info("Checkpoint written to %s", target)
    return target


def load_model(path: Union[str, Path]) -> OcgnnModel:
    source = Path(path)
    if not source.is_file():
        raise CheckpointError(f"checkpoint not found: {source}")
    try:
        payload = json.loads(source.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CheckpointError(f"{source}: corrupt checkpoint ({exc})") from None

    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{source}: not an ocgraph checkpoint")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{source}: checkpoint version {payload.get('version')} is not supported "
            f"(expected {CHECKPOINT_VERSION})"
        )

    try:
        model = _model_from_dict(payload)
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        raise CheckpointError(f"{source}: incomplete checkpoint ({exc})") from None
    except OcgraphError as exc:
        raise CheckpointError(f"{source}: invalid checkpoint ({exc})") from None
    logger.debug("Loaded checkpoint %s", source)
    return model


def _model_from_dict(payload: Dict[str, Any]) -> OcgnnModel:
    specs = [LayerSpec.from_dict(item) for item in payload["specs"]]
    validate_specs(specs)
    weights = init_weights(specs, seed=0)
    state = {}
    for name, tensor in weights.named_parameters():
        values = np.array(payload["weights"][name], dtype=np.float64)
        if values.shape != tensor.shape:
            raise ValueError(f"{name} has shape {values.shape}, expected {tensor.shape}")
        state[name] = values
    weights.load_state(state)

    center = np.array(payload["center"], dtype=np.float64)
    if center.shape != (specs[-1].out_dim,):
        raise ValueError(
            f"centre has width {center.size}, final layer produces {specs[-1].out_dim}"
        )
    radius_sq = payload.get("radius_sq")
    if radius_sq is None:
        radius_sq = float(payload["radius"]) ** 2
    best_val_auc = payload.get("best_val_auc")
    return OcgnnModel(
        specs=specs,
        weights=weights,
        sphere=HypersphereState(center=center, radius_sq=float(radius_sq)),
        config=TrainConfig.from_dict(payload["config"]),
        history=[
            EpochRecord(int(epoch), float(loss), float(val_loss), float(val_auc), float(radius))
            for epoch, loss, val_loss, val_auc, radius in payload.get("history", [])
        ],
        best_epoch=int(payload.get("best_epoch", 0)),
        best_val_auc=float("nan") if best_val_auc is None else float(best_val_auc),
    )


__all__ = ["CHECKPOINT_VERSION", "save_model", "load_model", "model_to_dict"]
