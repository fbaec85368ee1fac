"""Alternating optimisation of the encoder weights and the hypersphere radius."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from modules.autodiff import ops
from modules.autodiff.tensor import Tape
from modules.evaluation.metrics import roc_auc
from modules.graph.normalize import normalize_adjacency
from modules.graph.types import AttributedGraph, NormalizedAdjacency, OneClassSplit
from modules.layers.encoder import encode
from modules.layers.specs import LayerSpec, validate_specs
from modules.layers.weights import EncoderWeights, init_weights
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.early_stopping import EarlyStopping
from modules.ocgnn.hypersphere import (
    HypersphereState,
    anomaly_scores,
    init_center,
    percentile_radius_sq,
    squared_distances,
    warn_if_collapsed,
)
from modules.ocgnn.objective import objective_value, ocgnn_loss, weight_penalty
from modules.ocgnn.optimizer import Adam
from utils.errors import MetricError, TrainingDivergedError, ValidationError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    val_loss: float
    val_auc: float
    radius: float


@dataclass
class OcgnnModel:
    """Trained encoder plus hypersphere: everything needed to score nodes."""

    specs: List[LayerSpec]
    weights: EncoderWeights
    sphere: HypersphereState
    config: TrainConfig
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_auc: float = float("nan")

    @property
    def input_dim(self) -> int:
        return self.specs[0].in_dim

    @property
    def embedding_dim(self) -> int:
        return self.specs[-1].out_dim

    def embed(
        self, graph: AttributedGraph, adjacency: Optional[NormalizedAdjacency] = None
    ) -> np.ndarray:
        """One inference pass (dropout off) returning ``Z``."""

        if graph.num_features != self.input_dim:
            raise ValidationError(
                f"model expects {self.input_dim} features per node, graph has {graph.num_features}"
            )
        adjacency = adjacency if adjacency is not None else normalize_adjacency(graph)
        return encode(Tape.inference(), graph, adjacency, self.weights, self.specs).values

    def score(
        self,
        graph: AttributedGraph,
        adjacency: Optional[NormalizedAdjacency] = None,
        ids: Optional[Sequence[int]] = None,
    ) -> np.ndarray:
        embeddings = self.embed(graph, adjacency)
        if ids is not None:
            embeddings = embeddings[np.asarray(ids, dtype=np.int64)]
        return anomaly_scores(embeddings, self.sphere)


def score_nodes(
    model: OcgnnModel,
    graph: AttributedGraph,
    adjacency: Optional[NormalizedAdjacency] = None,
    ids: Optional[Sequence[int]] = None,
) -> np.ndarray:
    return model.score(graph, adjacency, ids)


def train(
    graph: AttributedGraph,
    adjacency: NormalizedAdjacency,
    split: OneClassSplit,
    specs: Sequence[LayerSpec],
    config: TrainConfig,
) -> OcgnnModel:
    """Train an OCGNN model and return the snapshot with the best validation AUC.

    Each epoch takes one Adam step on the objective (dropout on), then on
    every ``radius_update_interval``-th epoch sets ``r²`` to the ``(1 − β)``
    percentile of the training distances computed with dropout off, and
    finally evaluates the validation set. The returned sphere keeps the
    training centre with r² recomputed from the best snapshot's weights, so
    at most ``β·K`` training nodes score above zero.
    """

    config.validate()
    specs = list(specs)
    validate_specs(specs)
    if not split.train_ids:
        raise ValidationError("the split has no training nodes")
    if specs[0].in_dim != graph.num_features:
        raise ValidationError(
            f"first layer expects {specs[0].in_dim} features, graph has {graph.num_features}"
        )

    train_ids = np.asarray(split.train_ids, dtype=np.int64)
    val_ids = np.asarray(split.val_ids, dtype=np.int64)
    val_labels = np.asarray(split.val_labels, dtype=np.int64)
    val_normal = val_ids[val_labels == 0]

    weights = init_weights(specs, config.seed)
    dropout_rng = np.random.default_rng([config.seed, 1])
    initial = encode(Tape.inference(), graph, adjacency, weights, specs).values
    sphere = HypersphereState(center=init_center(initial[train_ids]), radius_sq=0.0)
    optimizer = Adam(weights.parameters(), learning_rate=config.learning_rate)
    stopper = EarlyStopping(config.patience)

    history: List[EpochRecord] = []
    best_weights = weights.copy()
    best_sphere = sphere.with_radius_sq(
        percentile_radius_sq(squared_distances(initial[train_ids], sphere.center), config.beta)
    )
    started = time.perf_counter()
    logger.info(
        "Training %s-layer encoder on %s nodes (K=%s, beta=%s, seed=%s)",
        len(specs),
        graph.num_nodes,
        train_ids.size,
        config.beta,
        config.seed,
        extra={"seed": config.seed},
    )

    for epoch in range(1, config.max_epochs + 1):
        tape = Tape()
        optimizer.zero_grad()
        z = encode(tape, graph, adjacency, weights, specs, training=True, rng=dropout_rng)
        loss = ocgnn_loss(tape, ops.gather_rows(tape, z, train_ids), sphere, config, weights)
        loss_value = loss.item()
        if not math.isfinite(loss_value):
            raise TrainingDivergedError(
                f"objective became {loss_value} at epoch {epoch} "
                f"(radius {sphere.radius:.4g}, learning rate {config.learning_rate})"
            )
        tape.backward(loss)
        optimizer.step()
        if not weights.all_finite():
            raise TrainingDivergedError(f"weights became non-finite at epoch {epoch}")

        embeddings = encode(Tape.inference(), graph, adjacency, weights, specs).values
        if epoch % config.radius_update_interval == 0:
            train_distances = squared_distances(embeddings[train_ids], sphere.center)
            sphere = sphere.with_radius_sq(percentile_radius_sq(train_distances, config.beta))
            warn_if_collapsed(train_distances, epoch=epoch)
            logger.debug(
                "Radius updated to %.6g at epoch %s",
                sphere.radius,
                epoch,
                extra={"epoch": epoch, "radius": sphere.radius},
            )

        val_auc = _validation_auc(anomaly_scores(embeddings[val_ids], sphere), val_labels)
        if val_normal.size:
            val_loss = objective_value(
                squared_distances(embeddings[val_normal], sphere.center),
                sphere.radius_sq,
                config.beta,
                regulariser=weight_penalty(weights),
                weight_decay=config.weight_decay,
            )
        else:
            val_loss = loss_value
        history.append(EpochRecord(epoch, loss_value, val_loss, val_auc, sphere.radius))
        logger.debug(
            "epoch %s loss=%.6f val_loss=%.6f val_auc=%.4f",
            epoch,
            loss_value,
            val_loss,
            val_auc,
            extra={"epoch": epoch, "loss": loss_value, "val_auc": val_auc},
        )

        if stopper.update(epoch, -math.inf if math.isnan(val_auc) else val_auc, val_loss):
            best_weights = weights.copy()
            # r² must come from the snapshot's own train distances
            snapshot_distances = squared_distances(embeddings[train_ids], sphere.center)
            best_sphere = sphere.with_radius_sq(
                percentile_radius_sq(snapshot_distances, config.beta)
            )
        if stopper.should_stop:
            break

    best_auc = stopper.best_auc if math.isfinite(stopper.best_auc) else float("nan")
    logger.info(
        "Training finished after %s epochs in %.2fs; best epoch %s, val AUC %.4f, r=%.6g",
        len(history),
        time.perf_counter() - started,
        stopper.best_epoch,
        best_auc,
        best_sphere.radius,
        extra={"seed": config.seed, "val_auc": best_auc, "radius": best_sphere.radius},
    )
    return OcgnnModel(
        specs=specs,
        weights=best_weights,
        sphere=best_sphere,
        config=config,
        history=history,
        best_epoch=stopper.best_epoch,
        best_val_auc=best_auc,
    )


def _validation_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    try:
        return roc_auc(scores, labels)
    except MetricError:
        return float("nan")


__all__ = ["EpochRecord", "OcgnnModel", "score_nodes", "train"]
