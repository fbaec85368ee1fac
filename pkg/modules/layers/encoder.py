"""Stack the configured layers into ``Z = g(X, A; W)``."""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from modules.autodiff import ops
from modules.autodiff.tensor import Tape, Tensor
from modules.graph.types import AttributedGraph, NormalizedAdjacency
from modules.layers.gcn import gcn_forward
from modules.layers.sage import sage_forward
from modules.layers.specs import LayerKind, LayerSpec
from modules.layers.weights import EncoderWeights
from utils.errors import DimensionError


logger = logging.getLogger(__name__)


def encode(
    tape: Tape,
    graph: AttributedGraph,
    adjacency: NormalizedAdjacency,
    weights: EncoderWeights,
    specs: Sequence[LayerSpec],
    *,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tensor:
    """Return the full ``N×F`` embedding matrix.

    Dropout follows each activation and is applied only when ``training``.
    """

    if len(specs) != len(weights):
        raise DimensionError(f"{len(specs)} layer specs but {len(weights)} weight sets")
    if specs and specs[0].in_dim != graph.num_features:
        raise DimensionError(
            f"encoder expects {specs[0].in_dim} input features, graph has {graph.num_features}"
        )
    if training and rng is None:
        rng = np.random.default_rng()

    h = Tensor.constant(graph.features, name="X")
    for spec, layer in zip(specs, weights.layers):
        if spec.kind is LayerKind.GCN:
            h = gcn_forward(tape, h, adjacency, layer.weight, has_activation=spec.has_activation)
        else:
            h = sage_forward(
                tape,
                h,
                graph,
                layer,
                aggregator=spec.kind,
                has_activation=spec.has_activation,
            )
        if spec.has_activation and training and spec.dropout_rate > 0.0:
            h = ops.dropout(tape, h, spec.dropout_rate, training=True, rng=rng)
    return h
