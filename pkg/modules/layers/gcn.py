"""Graph convolution layer: ``σ(Â · H · W)``."""

from __future__ import annotations

from modules.autodiff import ops
from modules.autodiff.tensor import Tape, Tensor
from modules.graph.types import NormalizedAdjacency
from utils.errors import DimensionError


def gcn_forward(
    tape: Tape,
    h: Tensor,
    adjacency: NormalizedAdjacency,
    weight: Tensor,
    *,
    has_activation: bool = True,
) -> Tensor:
    """Propagate over the normalised adjacency, then project; no bias term."""

    if h.shape[0] != adjacency.num_nodes:
        raise DimensionError(f"gcn: {h.shape[0]} feature rows for {adjacency.num_nodes} nodes")
    if h.shape[1] != weight.shape[0]:
        raise DimensionError(f"gcn: input width {h.shape[1]} != weight rows {weight.shape[0]}")
    out = ops.matmul(tape, ops.spmm(tape, adjacency, h), weight)
    return ops.relu(tape, out) if has_activation else out
