"""Pytest configuration: import path and shared graph fixtures."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest


PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import numpy as np  # noqa: E402

from modules.graph.loader import save_content_files  # noqa: E402
from modules.graph.synthetic import planted_anomaly_graph  # noqa: E402
from modules.graph.types import AttributedGraph  # noqa: E402


@pytest.fixture
def path_graph():
    """0 - 1 - 2 - 3 plus an isolated node 4; two classes."""

    features = np.arange(15, dtype=np.float64).reshape(5, 3) / 10.0
    return AttributedGraph.from_edges(
        features,
        [(0, 1), (1, 2), (2, 3)],
        labels=[0, 0, 1, 1, 0],
        class_names=("a", "b"),
        node_names=["p0", "p1", "p2", "p3", "p4"],
    )


@pytest.fixture
def five_node_graph():
    """Small connected graph with varied degrees for gradient checks."""

    rng = np.random.default_rng(7)
    return AttributedGraph.from_edges(
        rng.standard_normal((5, 4)),
        [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)],
        labels=[0, 0, 0, 1, 1],
        class_names=("normal", "anomaly"),
    )


@pytest.fixture
def planted_graph():
    return planted_anomaly_graph(num_nodes=60, num_features=8, shift=5.0, seed=3)


@pytest.fixture
def content_files(tmp_path, planted_graph):
    """The planted graph written as ``graph.content`` / ``graph.cites``."""

    content, cites = save_content_files(planted_graph, tmp_path / "data", "graph")
    return content, cites
