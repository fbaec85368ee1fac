"""Differentiable primitives recorded on a :class:`~modules.autodiff.tensor.Tape`.

Each function computes its forward value eagerly and registers a closure that
maps the upstream gradient to one gradient per input (``None`` for inputs that
need none). Kinks (ReLU, hinge) take subgradient 0.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

from modules.autodiff.tensor import Tape, Tensor
from modules.graph.types import AttributedGraph, NormalizedAdjacency
from utils.errors import ConfigError, DimensionError


def matmul(tape: Tape, a: Tensor, b: Tensor) -> Tensor:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: inner dimensions differ ({a.shape} x {b.shape})")
    a_values, b_values = a.values, b.values

    def backward(g: np.ndarray):
        grad_a = g @ b_values.T if a.requires_grad else None
        grad_b = a_values.T @ g if b.requires_grad else None
        return grad_a, grad_b

    return tape.record("matmul", a_values @ b_values, (a, b), backward)


def sparse_matmul(tape: Tape, matrix: sp.csr_matrix, h: Tensor, *, op: str = "sparse_matmul") -> Tensor:
    """Constant sparse matrix times a tracked dense matrix."""

    if matrix.shape[1] != h.shape[0]:
        raise DimensionError(f"{op}: sparse {matrix.shape} x dense {h.shape}")

    def backward(g: np.ndarray):
        return (np.asarray(matrix.T @ g),)

    return tape.record(op, np.asarray(matrix @ h.values), (h,), backward)


def spmm(tape: Tape, adjacency: Union[NormalizedAdjacency, sp.csr_matrix], h: Tensor) -> Tensor:
    """``Â · H`` for the normalised adjacency."""

    matrix = adjacency.matrix if isinstance(adjacency, NormalizedAdjacency) else adjacency
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"spmm: adjacency must be square, got {matrix.shape}")
    return sparse_matmul(tape, matrix, h, op="spmm")


def relu(tape: Tape, x: Tensor) -> Tensor:
    mask = x.values > 0

    def backward(g: np.ndarray):
        return (g * mask,)

    return tape.record("relu", np.where(mask, x.values, 0.0), (x,), backward)


def hinge(tape: Tape, x: Tensor) -> Tensor:
    """``[x]⁺``: clamp below zero."""

    mask = x.values > 0

    def backward(g: np.ndarray):
        return (g * mask,)

    return tape.record("hinge", np.where(mask, x.values, 0.0), (x,), backward)


def dropout(
    tape: Tape,
    x: Tensor,
    rate: float,
    *,
    training: bool,
    rng: np.random.Generator,
) -> Tensor:
    """Inverted dropout: survivors are scaled by ``1 / (1 - rate)``."""

    if not 0.0 <= rate < 1.0:
        raise ConfigError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)

    def backward(g: np.ndarray):
        return (g * mask,)

    return tape.record("dropout", x.values * mask, (x,), backward)


def gather_rows(tape: Tape, x: Tensor, ids: Sequence[int]) -> Tensor:
    index = np.asarray(ids, dtype=np.int64)
    if index.ndim != 1:
        raise DimensionError("gather_rows: ids must be a flat list")
    if index.size and (index.min() < 0 or index.max() >= x.shape[0]):
        raise DimensionError(f"gather_rows: id outside 0..{x.shape[0] - 1}")
    rows = x.shape[0]

    def backward(g: np.ndarray):
        grad = np.zeros((rows, g.shape[1]), dtype=np.float64)
        np.add.at(grad, index, g)
        return (grad,)

    return tape.record("gather_rows", x.values[index], (x,), backward)


def sq_dist_to_center(tape: Tape, z: Tensor, center: np.ndarray) -> Tensor:
    """Per-row ``‖z_i − c‖²`` as a K×1 column; ``center`` is a constant."""

    c = np.asarray(center, dtype=np.float64).reshape(-1)
    if c.size != z.shape[1]:
        raise DimensionError(f"sq_dist_to_center: center width {c.size} != embedding width {z.shape[1]}")
    diff = z.values - c

    def backward(g: np.ndarray):
        return (2.0 * diff * g,)

    return tape.record("sq_dist", np.sum(diff * diff, axis=1, keepdims=True), (z,), backward)


def add(tape: Tape, a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise DimensionError(f"add: shapes differ ({a.shape} vs {b.shape})")

    def backward(g: np.ndarray):
        return g, g

    return tape.record("add", a.values + b.values, (a, b), backward)


def add_row(tape: Tape, x: Tensor, bias: Tensor) -> Tensor:
    """Add a 1×F bias row to every row of ``x``."""

    if bias.shape != (1, x.shape[1]):
        raise DimensionError(f"add_row: bias shape {bias.shape} does not fit {x.shape}")

    def backward(g: np.ndarray):
        return g, np.sum(g, axis=0, keepdims=True)

    return tape.record("add_row", x.values + bias.values, (x, bias), backward)


def add_scalar(tape: Tape, x: Tensor, value: float) -> Tensor:
    def backward(g: np.ndarray):
        return (g,)

    return tape.record("add_scalar", x.values + float(value), (x,), backward)


def scale(tape: Tape, x: Tensor, alpha: float) -> Tensor:
    factor = float(alpha)

    def backward(g: np.ndarray):
        return (g * factor,)

    return tape.record("scale", x.values * factor, (x,), backward)


def concat_cols(tape: Tape, a: Tensor, b: Tensor) -> Tensor:
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"concat_cols: row counts differ ({a.shape} vs {b.shape})")
    split = a.shape[1]

    def backward(g: np.ndarray):
        return g[:, :split], g[:, split:]

    return tape.record("concat_cols", np.hstack([a.values, b.values]), (a, b), backward)


def total(tape: Tape, x: Tensor) -> Tensor:
    """Sum of every entry, as a 1×1 tensor."""

    shape = x.shape

    def backward(g: np.ndarray):
        return (np.full(shape, g[0, 0], dtype=np.float64),)

    return tape.record("sum", np.array([[np.sum(x.values)]]), (x,), backward)


def squared_norm(tape: Tape, x: Tensor) -> Tensor:
    """``‖x‖²_F`` as a 1×1 tensor."""

    values = x.values

    def backward(g: np.ndarray):
        return (2.0 * values * g[0, 0],)

    return tape.record("squared_norm", np.array([[np.sum(values * values)]]), (x,), backward)


def neighbor_mean(tape: Tape, graph: AttributedGraph, h: Tensor) -> Tensor:
    """Row ``i`` is the mean of ``h_j`` over neighbours ``j``; zero when isolated."""

    if h.shape[0] != graph.num_nodes:
        raise DimensionError(f"neighbor_mean: {h.shape[0]} rows for {graph.num_nodes} nodes")
    return sparse_matmul(tape, graph.mean_operator, h, op="neighbor_mean")


def neighbor_max(tape: Tape, graph: AttributedGraph, h: Tensor) -> Tensor:
    """Row ``i`` is the element-wise max of ``h_j`` over neighbours ``j``.

    Isolated nodes get a zero row. The gradient of each output entry flows to
    the first neighbour (in index order) attaining the maximum.
    """

    n, width = h.shape
    if n != graph.num_nodes:
        raise DimensionError(f"neighbor_max: {n} rows for {graph.num_nodes} nodes")
    indptr, indices = graph.adjacency.indptr, graph.adjacency.indices
    values = h.values
    output = np.zeros((n, width), dtype=np.float64)
    winners = np.zeros((n, width), dtype=np.int64)
    columns = np.arange(width)
    active = np.flatnonzero(np.diff(indptr) > 0)
    for node in active:
        neighbours = indices[indptr[node] : indptr[node + 1]]
        block = values[neighbours]
        best = np.argmax(block, axis=0)
        output[node] = block[best, columns]
        winners[node] = neighbours[best]

    def backward(g: np.ndarray):
        grad = np.zeros((n, width), dtype=np.float64)
        rows = winners[active].ravel()
        cols = np.tile(columns, active.size)
        np.add.at(grad, (rows, cols), g[active].ravel())
        return (grad,)

    return tape.record("neighbor_max", output, (h,), backward)


__all__ = [
    "matmul",
    "sparse_matmul",
    "spmm",
    "relu",
    "hinge",
    "dropout",
    "gather_rows",
    "sq_dist_to_center",
    "add",
    "add_row",
    "add_scalar",
    "scale",
    "concat_cols",
    "total",
    "squared_norm",
    "neighbor_mean",
    "neighbor_max",
]
