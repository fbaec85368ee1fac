from __future__ import annotations

import json
from dataclasses import replace

import numpy as np
import pytest

from modules.graph.normalize import normalize_adjacency
from modules.graph.split import make_one_class_split
from modules.graph.synthetic import NORMAL_CLASS
from modules.layers.specs import LayerKind, build_layer_specs
from modules.ocgnn.checkpoint import CHECKPOINT_VERSION, load_model, save_model
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.trainer import train
from utils.errors import CheckpointError


@pytest.fixture
def trained(planted_graph):
    adjacency = normalize_adjacency(planted_graph)
    split = make_one_class_split(planted_graph, NORMAL_CLASS, seed=1)
    specs = build_layer_specs(
        planted_graph.num_features, [(LayerKind.SAGE_POOL, 6), (LayerKind.GCN, 3)], dropout_rate=0.5
    )
    config = TrainConfig(learning_rate=0.01, max_epochs=25, patience=25, seed=2)
    return train(planted_graph, adjacency, split, specs, config), adjacency


def test_round_trip_preserves_scores_bitwise(tmp_path, planted_graph, trained):
    model, adjacency = trained
    path = save_model(model, tmp_path / "model.json")

    restored = load_model(path)

    assert np.array_equal(
        restored.score(planted_graph, adjacency), model.score(planted_graph, adjacency)
    )
    assert restored.sphere.radius_sq == model.sphere.radius_sq
    assert restored.specs == model.specs
    assert restored.config == model.config
    assert restored.best_epoch == model.best_epoch
    assert len(restored.history) == len(model.history)


def test_saving_twice_gives_identical_bytes(tmp_path, trained):
    model, _ = trained

    first = save_model(model, tmp_path / "a.json").read_bytes()
    second = save_model(model, tmp_path / "b.json").read_bytes()

    assert first == second


def test_missing_checkpoint(tmp_path):
    with pytest.raises(CheckpointError, match="not found"):
        load_model(tmp_path / "absent.json")


def test_truncated_checkpoint(tmp_path, trained):
    model, _ = trained
    path = save_model(model, tmp_path / "model.json")
    path.write_text(path.read_text(encoding="utf-8")[:200], encoding="utf-8")

    with pytest.raises(CheckpointError, match="corrupt"):
        load_model(path)


def test_foreign_json_is_rejected(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"hello": "world"}), encoding="utf-8")

    with pytest.raises(CheckpointError, match="not an ocgraph checkpoint"):
        load_model(path)


def test_other_version_is_rejected(tmp_path, trained):
    model, _ = trained
    path = save_model(model, tmp_path / "model.json")
    payload = json.loads(path.read_text(encoding="utf-8"))
    payload["version"] = CHECKPOINT_VERSION + 1
    path.write_text(json.dumps(payload), encoding="utf-8")

    with pytest.raises(CheckpointError, match="version"):
        load_model(path)


def test_weight_shape_mismatch_is_rejected(tmp_path, trained):
    model, _ = trained
    path = save_model(model, tmp_path / "model.json")
    payload = json.loads(path.read_text(encoding="utf-8"))
    payload["weights"]["layer1.weight"] = [[0.0]]
    path.write_text(json.dumps(payload), encoding="utf-8")

    with pytest.raises(CheckpointError, match="layer1.weight"):
        load_model(path)


def test_checkpoint_error_exits_with_usage_code():
    assert CheckpointError("x").exit_code == 2


def test_config_survives_round_trip(tmp_path, trained):
    model, _ = trained
    model = replace(model, config=replace(model.config, beta=0.3))

    restored = load_model(save_model(model, tmp_path / "m.json"))

    assert restored.config.beta == 0.3
