from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp

from modules.graph.loader import GraphLoader, load_graph
from modules.graph.types import AttributedGraph
from utils.errors import GraphFormatError, GraphValidationError, ValidationError


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_content_and_cites_round_trip(content_files, planted_graph):
    content, cites = content_files
    graph = load_graph(content, cites)

    assert graph.num_nodes == planted_graph.num_nodes
    assert graph.num_edges == planted_graph.num_edges
    assert np.array_equal(graph.features, planted_graph.features)
    assert graph.node_names == planted_graph.node_names
    assert set(graph.class_names) == {"normal", "anomaly"}
    restored = [graph.class_names[code] for code in graph.labels]
    original = [planted_graph.class_names[code] for code in planted_graph.labels]
    assert restored == original


def test_duplicate_and_reversed_edges_collapse(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 0 x\nb 0 1 x\nc 1 1 y\n")
    cites = _write(tmp_path / "g.cites", "a b\nb a\na b\nb c\n")

    graph = load_graph(content, cites)

    assert graph.num_edges == 2
    assert (graph.adjacency != graph.adjacency.T).nnz == 0
    assert graph.adjacency.diagonal().sum() == 0


def test_self_loop_rows_are_dropped(tmp_path, caplog):
    content = _write(tmp_path / "g.content", "a 1 x\nb 2 x\n")
    cites = _write(tmp_path / "g.cites", "a a\na b\n")

    graph = load_graph(content, cites)

    assert graph.num_edges == 1
    assert "self-loop" in caplog.text


def test_undeclared_edge_endpoint_is_rejected(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb 2 x\n")
    cites = _write(tmp_path / "g.cites", "a b\nb zz\n")

    with pytest.raises(GraphValidationError, match="zz"):
        load_graph(content, cites)


def test_drop_dangling_keeps_valid_edges(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb 2 x\n")
    cites = _write(tmp_path / "g.cites", "a b\nb zz\n")

    graph = GraphLoader(drop_dangling=True).load(content, cites)

    assert graph.num_edges == 1


def test_non_numeric_feature_reports_line(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb oops x\n")
    cites = _write(tmp_path / "g.cites", "a b\n")

    with pytest.raises(GraphFormatError) as excinfo:
        load_graph(content, cites)

    assert excinfo.value.line == 2
    assert excinfo.value.exit_code == 2


def test_ragged_rows_are_rejected(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 2 x\nb 1 x\n")
    cites = _write(tmp_path / "g.cites", "a b\n")

    with pytest.raises(GraphFormatError, match="columns"):
        load_graph(content, cites)


def test_invalid_utf8_label_reports_line(tmp_path):
    content = tmp_path / "g.content"
    content.write_bytes(b"a 1 x\nb 0 \xff\xfe\n")
    cites = _write(tmp_path / "g.cites", "a b\n")

    with pytest.raises(GraphFormatError, match="UTF-8") as excinfo:
        load_graph(content, cites)

    assert excinfo.value.line == 2
    assert excinfo.value.exit_code == 2


def test_invalid_utf8_in_csv_edges_and_labels(tmp_path):
    features = _write(tmp_path / "x.csv", "node_id,f0\nu,1.0\nv,3.0\n")
    edges = _write(tmp_path / "e.csv", "source,target\nu,v\n")
    labels = _write(tmp_path / "y.csv", "node_id,label\nu,red\nv,blue\n")
    bad_edges = tmp_path / "bad_e.csv"
    bad_edges.write_bytes(b"source,target\nu,v\nv,\xc3\x28\n")
    bad_labels = tmp_path / "bad_y.csv"
    bad_labels.write_bytes(b"node_id,label\n\xffu,red\nv,blue\n")

    with pytest.raises(GraphFormatError) as excinfo:
        load_graph(features, bad_edges, labels)
    assert excinfo.value.line == 3

    with pytest.raises(GraphFormatError) as excinfo:
        load_graph(features, edges, bad_labels)
    assert excinfo.value.line == 2


def test_nan_feature_is_rejected(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb nan x\n")
    cites = _write(tmp_path / "g.cites", "a b\n")

    with pytest.raises(GraphValidationError, match="row 1"):
        load_graph(content, cites)


def test_missing_file_is_a_validation_error(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\n")

    with pytest.raises(ValidationError, match="not found"):
        load_graph(content, tmp_path / "missing.cites")


def test_csv_features_with_separate_labels(tmp_path):
    features = _write(tmp_path / "x.csv", "node_id,f0,f1\nu,1.0,2.0\nv,3.0,4.0\nw,5.0,6.0\n")
    edges = _write(tmp_path / "e.csv", "source,target\nu,v\nv,w\n")
    labels = _write(tmp_path / "y.csv", "node_id,label\nu,red\nv,blue\nw,red\n")

    graph = load_graph(features, edges, labels)

    assert graph.num_nodes == 3
    assert graph.num_features == 2
    assert graph.class_names == ("blue", "red")
    assert graph.labels.tolist() == [1, 0, 1]


def test_missing_label_row_is_rejected(tmp_path):
    features = _write(tmp_path / "x.csv", "node_id,f0\nu,1.0\nv,3.0\n")
    edges = _write(tmp_path / "e.csv", "source,target\nu,v\n")
    labels = _write(tmp_path / "y.csv", "node_id,label\nu,red\n")

    with pytest.raises(GraphValidationError, match="'v'"):
        load_graph(features, edges, labels)


def test_npz_adjacency_must_be_symmetric(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb 2 x\nc 3 y\n")
    asymmetric = sp.csr_matrix(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], dtype=np.float64))
    sp.save_npz(tmp_path / "adj.npz", asymmetric)

    with pytest.raises(GraphValidationError, match="symmetric"):
        load_graph(content, tmp_path / "adj.npz")


def test_npz_adjacency_is_accepted_when_symmetric(tmp_path):
    content = _write(tmp_path / "g.content", "a 1 x\nb 2 x\nc 3 y\n")
    symmetric = sp.csr_matrix(np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.float64))
    sp.save_npz(tmp_path / "adj.npz", symmetric)

    graph = load_graph(content, tmp_path / "adj.npz")

    assert graph.num_edges == 2


def test_from_edges_rejects_out_of_range_endpoint():
    with pytest.raises(GraphValidationError, match="outside"):
        AttributedGraph.from_edges(np.zeros((3, 2)), [(0, 3)])


def test_from_arrays_rejects_weighted_adjacency():
    weighted = np.array([[0, 2.0], [2.0, 0]])
    with pytest.raises(GraphValidationError, match="binary"):
        AttributedGraph.from_arrays(np.zeros((2, 1)), weighted)


def test_unknown_class_name_lists_known_classes(path_graph):
    with pytest.raises(GraphValidationError, match="known classes: a, b"):
        path_graph.class_id("zebra")


def test_class_lookup_treats_spaces_and_underscores_alike():
    graph = AttributedGraph.from_edges(
        np.zeros((3, 1)),
        [(0, 1)],
        labels=[0, 1, 1],
        class_names=("Neural_Networks", "Theory"),
    )

    assert graph.class_id("Neural Networks") == 0
    assert graph.class_id("Neural_Networks") == 0
    with pytest.raises(GraphValidationError):
        graph.class_id("Neural")


def test_degrees_and_mean_operator(path_graph):
    assert path_graph.degrees.tolist() == [1, 2, 2, 1, 0]
    mean = path_graph.mean_operator.toarray()
    assert mean[1].tolist() == [0.5, 0.0, 0.5, 0.0, 0.0]
    assert mean[4].sum() == 0.0
