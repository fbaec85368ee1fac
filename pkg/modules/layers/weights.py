"""Encoder parameters and their Glorot-uniform initialisation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from modules.autodiff.tensor import Tensor
from modules.layers.specs import LayerKind, LayerSpec, validate_specs


logger = logging.getLogger(__name__)


@dataclass
class LayerWeights:
    """``weight`` is ``in×out`` (GCN) or ``2·in×out`` (SAGE, acting on ``[h ‖ a]``)."""

    weight: Tensor
    pool_weight: Optional[Tensor] = None
    pool_bias: Optional[Tensor] = None


class EncoderWeights:
    """The trainable weight set ``W = {W^(1), …, W^(L)}``."""

    def __init__(self, layers: Sequence[LayerWeights]) -> None:
        self.layers: List[LayerWeights] = list(layers)

    def __len__(self) -> int:
        return len(self.layers)

    def named_parameters(self) -> Iterator[Tuple[str, Tensor]]:
        for index, layer in enumerate(self.layers):
            yield f"layer{index}.weight", layer.weight
            if layer.pool_weight is not None:
                yield f"layer{index}.pool_weight", layer.pool_weight
            if layer.pool_bias is not None:
                yield f"layer{index}.pool_bias", layer.pool_bias

    def parameters(self) -> List[Tensor]:
        return [tensor for _, tensor in self.named_parameters()]

    def decayed(self) -> List[Tensor]:
        """Weight matrices covered by the ``(λ/2)Σ‖W‖²`` term; biases are excluded."""

        return [tensor for name, tensor in self.named_parameters() if not name.endswith("bias")]

    def zero_grad(self) -> None:
        for tensor in self.parameters():
            tensor.zero_grad()

    def state(self) -> Dict[str, np.ndarray]:
        return {name: tensor.values.copy() for name, tensor in self.named_parameters()}

    def load_state(self, state: Dict[str, np.ndarray]) -> None:
        for name, tensor in self.named_parameters():
            tensor.values = np.array(state[name], dtype=np.float64)

    def copy(self) -> "EncoderWeights":
        def clone(tensor: Optional[Tensor]) -> Optional[Tensor]:
            if tensor is None:
                return None
            return Tensor.parameter(tensor.values.copy(), name=tensor.name)

        return EncoderWeights(
            [
                LayerWeights(clone(layer.weight), clone(layer.pool_weight), clone(layer.pool_bias))
                for layer in self.layers
            ]
        )

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(tensor.values)) for tensor in self.parameters())


def glorot_bound(fan_in: int, fan_out: int) -> float:
    return math.sqrt(6.0 / (fan_in + fan_out))


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int, name: str) -> Tensor:
    bound = glorot_bound(fan_in, fan_out)
    return Tensor.parameter(rng.uniform(-bound, bound, size=(fan_in, fan_out)), name=name)


def init_weights(specs: Sequence[LayerSpec], seed: int) -> EncoderWeights:
    """Glorot-uniform matrices drawn in layer order from one seeded generator; zero biases."""

    validate_specs(specs)
    rng = np.random.default_rng(seed)
    layers: List[LayerWeights] = []
    for index, spec in enumerate(specs):
        if spec.kind is LayerKind.GCN:
            layers.append(LayerWeights(_glorot(rng, spec.in_dim, spec.out_dim, f"W{index}")))
            continue
        pool_weight = pool_bias = None
        if spec.kind is LayerKind.SAGE_POOL:
            pool_weight = _glorot(rng, spec.in_dim, spec.in_dim, f"W_pool{index}")
            pool_bias = Tensor.parameter(np.zeros((1, spec.in_dim)), name=f"b_pool{index}")
        weight = _glorot(rng, 2 * spec.in_dim, spec.out_dim, f"W{index}")
        layers.append(LayerWeights(weight, pool_weight, pool_bias))

    weights = EncoderWeights(layers)
    logger.debug(
        "Initialised %s layers (%s parameters, seed=%s)",
        len(layers),
        sum(tensor.values.size for tensor in weights.parameters()),
        seed,
    )
    return weights


__all__ = ["LayerWeights", "EncoderWeights", "glorot_bound", "init_weights"]
