"""GraphSAGE layer with mean or max-pool neighbour aggregation.

Output row ``i`` is ``[h_i ‖ a_i] · W`` where ``a_i`` aggregates the
neighbours of ``i`` (the node itself excluded). With the pool aggregator,
``a_i = max_j ReLU(h_j · W_pool + b_pool)`` element-wise. Isolated nodes use
``a_i = 0``.
"""

from __future__ import annotations

import logging

from modules.autodiff import ops
from modules.autodiff.tensor import Tape, Tensor
from modules.graph.types import AttributedGraph
from modules.layers.specs import LayerKind
from modules.layers.weights import LayerWeights
from utils.errors import DimensionError


logger = logging.getLogger(__name__)


def sage_forward(
    tape: Tape,
    h: Tensor,
    graph: AttributedGraph,
    weights: LayerWeights,
    *,
    aggregator: LayerKind = LayerKind.SAGE_POOL,
    has_activation: bool = True,
) -> Tensor:
    width = h.shape[1]
    if weights.weight.shape[0] != 2 * width:
        raise DimensionError(
            f"sage: weight has {weights.weight.shape[0]} rows, expected 2 x {width}"
        )

    if aggregator is LayerKind.SAGE_MEAN:
        aggregated = ops.neighbor_mean(tape, graph, h)
    elif aggregator is LayerKind.SAGE_POOL:
        if weights.pool_weight is None or weights.pool_bias is None:
            raise DimensionError("sage: the pool aggregator needs pool_weight and pool_bias")
        pooled = ops.relu(
            tape,
            ops.add_row(tape, ops.matmul(tape, h, weights.pool_weight), weights.pool_bias),
        )
        aggregated = ops.neighbor_max(tape, graph, pooled)
    else:
        raise DimensionError(f"sage: unsupported aggregator {aggregator}")

    out = ops.matmul(tape, ops.concat_cols(tape, h, aggregated), weights.weight)
    return ops.relu(tape, out) if has_activation else out
