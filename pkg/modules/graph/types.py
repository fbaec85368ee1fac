"""Immutable graph containers used across the engine."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from utils.errors import GraphValidationError


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AttributedGraph:
    """Undirected attributed graph ``G = (V, E, X)`` with optional node classes.

    ``adjacency`` is a binary symmetric CSR matrix without self-loops. Node ids
    are dense ``0..N-1``; ``node_names`` keeps the identifiers found in the
    input files so results can be reported against them.
    """

    features: np.ndarray
    adjacency: sp.csr_matrix
    labels: Optional[np.ndarray] = None
    class_names: Tuple[str, ...] = ()
    node_names: Tuple[str, ...] = ()

    @property
    def num_nodes(self) -> int:
        return int(self.features.shape[0])

    @property
    def num_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.nnz // 2)

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr).astype(np.int64)

    @cached_property
    def mean_operator(self) -> sp.csr_matrix:
        """Row-normalised adjacency ``D^-1 A``; rows of isolated nodes stay empty."""

        inverse = np.zeros(self.num_nodes, dtype=np.float64)
        nonzero = self.degrees > 0
        inverse[nonzero] = 1.0 / self.degrees[nonzero]
        return sp.csr_matrix(sp.diags(inverse) @ self.adjacency)

    def class_id(self, name: str) -> int:
        """Index of a class name; spaces and underscores are interchangeable."""

        name = str(name)
        if name in self.class_names:
            return self.class_names.index(name)
        wanted = _class_key(name)
        matches = [code for code, known in enumerate(self.class_names) if _class_key(known) == wanted]
        if len(matches) == 1:
            return matches[0]
        raise GraphValidationError(
            f"Unknown class '{name}'; known classes: {', '.join(self.class_names)}"
        )

    def node_name(self, node_id: int) -> str:
        if self.node_names:
            return self.node_names[node_id]
        return str(node_id)

    @classmethod
    def from_arrays(
        cls,
        features,
        adjacency,
        *,
        labels: Optional[Sequence[int]] = None,
        class_names: Sequence[str] = (),
        node_names: Sequence[str] = (),
    ) -> "AttributedGraph":
        """Validate an explicit adjacency and wrap the arrays in a graph."""

        matrix = sp.csr_matrix(adjacency, dtype=np.float64)
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        features_array = np.asarray(features, dtype=np.float64)
        if features_array.ndim != 2:
            raise GraphValidationError("features must be a 2-D matrix")
        n = features_array.shape[0]
        if matrix.shape != (n, n):
            raise GraphValidationError(
                f"adjacency shape {matrix.shape} does not match {n} feature rows"
            )
        if matrix.diagonal().any():
            raise GraphValidationError("adjacency must have an empty diagonal")
        if matrix.nnz and not np.all(matrix.data == 1.0):
            raise GraphValidationError("adjacency must be binary (edge weights are not supported)")
        if (matrix != matrix.T).nnz:
            raise GraphValidationError("adjacency is not symmetric")

        graph = cls(
            features=features_array,
            adjacency=_canonical(matrix),
            labels=None if labels is None else np.asarray(labels, dtype=np.int64),
            class_names=tuple(str(name) for name in class_names),
            node_names=tuple(str(name) for name in node_names),
        )
        graph.validate()
        return graph

    @classmethod
    def from_edges(
        cls,
        features,
        edges: Sequence[Tuple[int, int]],
        *,
        labels: Optional[Sequence[int]] = None,
        class_names: Sequence[str] = (),
        node_names: Sequence[str] = (),
    ) -> "AttributedGraph":
        """Build a graph from an undirected edge list; duplicates collapse."""

        features_array = np.asarray(features, dtype=np.float64)
        if features_array.ndim != 2:
            raise GraphValidationError("features must be a 2-D matrix")
        n = features_array.shape[0]
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
            raise GraphValidationError(
                f"edge ({bad[0]}, {bad[1]}) references a node outside 0..{n - 1}"
            )
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        matrix = sp.coo_matrix(
            (np.ones(rows.size, dtype=np.float64), (rows, cols)), shape=(n, n)
        ).tocsr()
        matrix.sum_duplicates()
        matrix.data[:] = 1.0

        graph = cls(
            features=features_array,
            adjacency=_canonical(matrix),
            labels=None if labels is None else np.asarray(labels, dtype=np.int64),
            class_names=tuple(str(name) for name in class_names),
            node_names=tuple(str(name) for name in node_names),
        )
        graph.validate()
        return graph

    def validate(self) -> None:
        n = self.num_nodes
        if not np.all(np.isfinite(self.features)):
            row = int(np.argwhere(~np.isfinite(self.features))[0][0])
            raise GraphValidationError(f"feature row {row} contains NaN or infinity")
        if self.adjacency.shape != (n, n):
            raise GraphValidationError("adjacency shape does not match the node count")
        if self.labels is not None:
            if self.labels.shape != (n,):
                raise GraphValidationError("labels must provide exactly one class per node")
            if self.labels.size and (
                self.labels.min() < 0 or self.labels.max() >= len(self.class_names)
            ):
                raise GraphValidationError("labels reference an undeclared class")
        if self.node_names and len(self.node_names) != n:
            raise GraphValidationError("node_names must provide exactly one name per node")
        logger.debug("Validated graph with N=%s M=%s D=%s", n, self.num_edges, self.num_features)


@dataclass(frozen=True, eq=False)
class NormalizedAdjacency:
    """Symmetric-normalised self-looped adjacency ``D̃^-1/2 (A + I) D̃^-1/2``."""

    matrix: sp.csr_matrix
    degrees: np.ndarray

    @property
    def num_nodes(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class OneClassSplit:
    """Train ids (normal only) and balanced, labelled validation/test ids."""

    train_ids: Tuple[int, ...]
    val_ids: Tuple[int, ...]
    val_labels: Tuple[int, ...]
    test_ids: Tuple[int, ...]
    test_labels: Tuple[int, ...]
    seed: int
    normal_class: str = ""
    ratios: Tuple[float, float, float] = field(default=(0.60, 0.15, 0.25))

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return len(self.train_ids), len(self.val_ids), len(self.test_ids)


def _canonical(matrix: sp.csr_matrix) -> sp.csr_matrix:
    canonical = sp.csr_matrix(matrix, dtype=np.float64)
    canonical.sort_indices()
    return canonical


def _class_key(name: str) -> str:
    return " ".join(name.replace("_", " ").split())
