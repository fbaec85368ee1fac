"""Symmetric normalisation of the self-looped adjacency matrix."""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp

from modules.graph.types import AttributedGraph, NormalizedAdjacency


logger = logging.getLogger(__name__)


def normalize_adjacency(graph: AttributedGraph) -> NormalizedAdjacency:
    """Return ``Â = D̃^-1/2 (A + I) D̃^-1/2`` with ``D̃_ii = Σ_j (A + I)_ij``."""

    n = graph.num_nodes
    looped = sp.csr_matrix(graph.adjacency + sp.identity(n, format="csr", dtype=np.float64))
    looped.sort_indices()
    degrees = np.asarray(looped.sum(axis=1)).ravel()
    inverse_sqrt = 1.0 / np.sqrt(degrees)

    rows = np.repeat(np.arange(n), np.diff(looped.indptr))
    data = inverse_sqrt[rows] * inverse_sqrt[looped.indices]
    matrix = sp.csr_matrix((data, looped.indices.copy(), looped.indptr.copy()), shape=(n, n))

    logger.debug("Normalised adjacency for %s nodes (nnz=%s)", n, matrix.nnz)
    return NormalizedAdjacency(matrix=matrix, degrees=degrees)


def normalize_adjacency_rowwise(graph: AttributedGraph) -> NormalizedAdjacency:
    """Build ``Â`` one row at a time from the neighbour lists.

    Produces the same matrix as :func:`normalize_adjacency`; kept as an
    independent construction for cross-checking.
    """

    n = graph.num_nodes
    adjacency = graph.adjacency
    degrees = np.array(
        [adjacency.indptr[node + 1] - adjacency.indptr[node] + 1 for node in range(n)],
        dtype=np.float64,
    )
    inverse_sqrt = 1.0 / np.sqrt(degrees)

    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for node in range(n):
        neighbours = adjacency.indices[adjacency.indptr[node] : adjacency.indptr[node + 1]]
        row = sorted(set(int(j) for j in neighbours) | {node})
        for column in row:
            indices.append(column)
            data.append(inverse_sqrt[node] * inverse_sqrt[column])
        indptr.append(len(indices))

    matrix = sp.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int32), np.array(indptr)),
        shape=(n, n),
    )
    return NormalizedAdjacency(matrix=matrix, degrees=degrees)


__all__ = ["normalize_adjacency", "normalize_adjacency_rowwise"]
