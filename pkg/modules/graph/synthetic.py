"""Synthetic attributed graphs with planted anomalies."""

from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np

from modules.graph.types import AttributedGraph
from utils.errors import ConfigError


logger = logging.getLogger(__name__)

NORMAL_CLASS = "normal"
ANOMALY_CLASS = "anomaly"


def planted_anomaly_graph(
    num_nodes: int = 60,
    num_features: int = 8,
    *,
    shift: float = 5.0,
    intra_probability: float = 0.3,
    inter_probability: float = 0.02,
    seed: int = 0,
) -> AttributedGraph:
    """Two-community graph; the anomalous community is shifted by ``shift`` std-devs.

    The first half of the nodes form the normal community with standard normal
    features, the second half the anomalous community whose features are drawn
    with the same spread around ``shift``.
    """

    if num_nodes < 4:
        raise ConfigError("a planted-anomaly graph needs at least 4 nodes")
    rng = np.random.default_rng(seed)
    half = num_nodes // 2
    labels = np.array([0] * half + [1] * (num_nodes - half), dtype=np.int64)

    features = rng.standard_normal((num_nodes, num_features))
    features[labels == 1] += shift

    same = labels[:, None] == labels[None, :]
    probability = np.where(same, intra_probability, inter_probability)
    draws = rng.random((num_nodes, num_nodes))
    upper = np.triu(draws < probability, k=1)
    edges: List[Tuple[int, int]] = [(int(i), int(j)) for i, j in zip(*np.nonzero(upper))]

    graph = AttributedGraph.from_edges(
        features,
        edges,
        labels=labels,
        class_names=(NORMAL_CLASS, ANOMALY_CLASS),
        node_names=[f"n{node}" for node in range(num_nodes)],
    )
    logger.debug(
        "Planted-anomaly graph: N=%s M=%s shift=%s seed=%s",
        graph.num_nodes,
        graph.num_edges,
        shift,
        seed,
    )
    return graph


def inject_contextual_anomalies(
    graph: AttributedGraph,
    count: int,
    *,
    candidates: int = 50,
    seed: int = 0,
) -> Tuple[AttributedGraph, np.ndarray]:
    """Swap the features of ``count`` nodes for those of a distant node.

    For each chosen node, ``candidates`` other nodes are drawn and the one with
    the largest Euclidean feature distance donates its attributes. The chosen
    nodes are relabelled into an ``anomaly`` class appended to ``class_names``.
    Returns the new graph and the ids of the injected nodes.
    """

    if not 0 < count <= graph.num_nodes:
        raise ConfigError(f"count must be in 1..{graph.num_nodes}")
    rng = np.random.default_rng(seed)
    targets = rng.choice(graph.num_nodes, size=count, replace=False)
    features = graph.features.copy()
    for node in targets:
        pool = rng.choice(graph.num_nodes, size=min(candidates, graph.num_nodes), replace=False)
        distances = np.linalg.norm(graph.features[pool] - graph.features[node], axis=1)
        features[node] = graph.features[pool[int(np.argmax(distances))]]

    if graph.has_labels:
        labels = graph.labels.copy()
        class_names = graph.class_names
    else:
        labels = np.zeros(graph.num_nodes, dtype=np.int64)
        class_names = (NORMAL_CLASS,)
    if ANOMALY_CLASS not in class_names:
        class_names = class_names + (ANOMALY_CLASS,)
    labels[targets] = class_names.index(ANOMALY_CLASS)

    injected = AttributedGraph(
        features=features,
        adjacency=graph.adjacency,
        labels=labels,
        class_names=class_names,
        node_names=graph.node_names,
    )
    injected.validate()
    logger.info("Injected %s contextual anomalies (seed=%s)", count, seed)
    return injected, np.sort(targets)


__all__ = [
    "NORMAL_CLASS",
    "ANOMALY_CLASS",
    "planted_anomaly_graph",
    "inject_contextual_anomalies",
]
