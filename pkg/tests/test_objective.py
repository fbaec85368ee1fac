from __future__ import annotations

import numpy as np
import pytest

from modules.autodiff import ops
from modules.autodiff.gradcheck import numerical_gradient, relative_error
from modules.autodiff.tensor import Tape, Tensor
from modules.graph.normalize import normalize_adjacency
from modules.layers.encoder import encode
from modules.layers.specs import LayerKind, build_layer_specs
from modules.layers.weights import init_weights
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.hypersphere import HypersphereState, init_center, percentile_radius_sq, squared_distances
from modules.ocgnn.objective import objective_value, ocgnn_loss, weight_penalty
from utils.errors import DimensionError


def test_loss_value_by_hand():
    z = Tensor.parameter(np.array([[0.5, 0.0], [2.0, 0.0]]))
    sphere = HypersphereState(center=np.zeros(2), radius_sq=1.0)
    config = TrainConfig(beta=0.5, weight_decay=0.0)

    loss = ocgnn_loss(Tape(), z, sphere, config)

    # hinge terms 0 and 3, scaled by 1/(0.5 * 2), plus r² = 1
    assert loss.item() == pytest.approx(4.0)


def test_loss_gradient_flows_only_through_violators():
    z = Tensor.parameter(np.array([[0.5, 0.0], [2.0, 0.0]]))
    sphere = HypersphereState(center=np.zeros(2), radius_sq=1.0)
    tape = Tape()

    tape.backward(ocgnn_loss(tape, z, sphere, TrainConfig(beta=0.5, weight_decay=0.0)))

    assert np.allclose(z.grad, [[0.0, 0.0], [4.0, 0.0]])


def test_regulariser_adds_half_lambda_squared_norm():
    specs = build_layer_specs(3, [(LayerKind.GCN, 2)])
    weights = init_weights(specs, seed=0)
    z = Tensor.constant(np.zeros((2, 2)))
    sphere = HypersphereState(center=np.zeros(2), radius_sq=0.5)
    config = TrainConfig(beta=0.1, weight_decay=0.2)

    loss = ocgnn_loss(Tape(), z, sphere, config, weights)

    expected = 0.5 + 0.1 * np.sum(weights.layers[0].weight.values ** 2)
    assert loss.item() == pytest.approx(expected, rel=1e-12)
    assert weight_penalty(weights) == pytest.approx(np.sum(weights.layers[0].weight.values ** 2))


def test_pool_bias_is_not_decayed():
    specs = build_layer_specs(3, [(LayerKind.SAGE_POOL, 2)])
    weights = init_weights(specs, seed=0)
    weights.layers[0].pool_bias.values[:] = 10.0

    expected = sum(np.sum(t.values ** 2) for t in (weights.layers[0].weight, weights.layers[0].pool_weight))
    assert weight_penalty(weights) == pytest.approx(expected)


def test_objective_value_agrees_with_tape_loss():
    rng = np.random.default_rng(3)
    z = rng.standard_normal((12, 3))
    sphere = HypersphereState(center=z.mean(axis=0), radius_sq=1.3)
    config = TrainConfig(beta=0.25, weight_decay=0.0)

    tape_value = ocgnn_loss(Tape.inference(), Tensor.constant(z), sphere, config).item()
    plain_value = objective_value(squared_distances(z, sphere.center), 1.3, 0.25)

    assert tape_value == pytest.approx(plain_value, rel=1e-12)


def test_objective_value_of_empty_set_is_nan():
    assert np.isnan(objective_value(np.array([]), 1.0, 0.1))


def test_loss_rejects_width_mismatch():
    sphere = HypersphereState(center=np.zeros(3), radius_sq=0.0)

    with pytest.raises(DimensionError):
        ocgnn_loss(Tape(), Tensor.constant(np.zeros((2, 2))), sphere, TrainConfig())


@pytest.mark.parametrize("kind", [LayerKind.GCN, LayerKind.SAGE_MEAN, LayerKind.SAGE_POOL])
def test_end_to_end_loss_gradient_on_five_nodes(kind, five_node_graph):
    adjacency = normalize_adjacency(five_node_graph)
    specs = build_layer_specs(4, [(kind, 4), (kind, 3)], dropout_rate=0.0)
    weights = init_weights(specs, seed=2)
    train_ids = [0, 1, 2]
    config = TrainConfig(beta=0.5, weight_decay=0.01)

    initial = encode(Tape.inference(), five_node_graph, adjacency, weights, specs).values
    center = init_center(initial[train_ids])
    radius_sq = percentile_radius_sq(squared_distances(initial[train_ids], center), 0.5) * 0.5
    sphere = HypersphereState(center=center, radius_sq=radius_sq)

    def loss_on(tape):
        z = encode(tape, five_node_graph, adjacency, weights, specs)
        return ocgnn_loss(tape, ops.gather_rows(tape, z, train_ids), sphere, config, weights)

    tape = Tape()
    tape.backward(loss_on(tape))

    for name, tensor in weights.named_parameters():
        analytic = np.zeros_like(tensor.values) if tensor.grad is None else tensor.grad.copy()
        numeric = numerical_gradient(lambda: loss_on(Tape.inference()).item(), tensor.values)
        assert relative_error(numeric, analytic) < 1e-5, name
