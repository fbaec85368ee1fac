"""Adam updates with bias correction.

Weight decay is not applied here: the objective already carries the explicit
``(λ/2)Σ‖W‖²`` term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from modules.autodiff.tensor import Tensor
from utils.errors import DimensionError


@dataclass
class AdamState:
    step: int = 0
    first_moment: List[np.ndarray] = field(default_factory=list)
    second_moment: List[np.ndarray] = field(default_factory=list)

    def copy(self) -> "AdamState":
        return AdamState(
            step=self.step,
            first_moment=[m.copy() for m in self.first_moment],
            second_moment=[v.copy() for v in self.second_moment],
        )


def adam_step(
    weights: Sequence[np.ndarray],
    grads: Sequence[Optional[np.ndarray]],
    state: AdamState,
    learning_rate: float,
    *,
    betas: Tuple[float, float] = (0.9, 0.999),
    eps: float = 1e-8,
) -> Tuple[List[np.ndarray], AdamState]:
    """Return updated weight arrays and the advanced optimiser state.

    Missing gradients count as zero. Inputs are not modified.
    """

    if len(weights) != len(grads):
        raise DimensionError(f"{len(weights)} weights but {len(grads)} gradients")
    beta1, beta2 = betas
    if not state.first_moment:
        state = AdamState(
            step=state.step,
            first_moment=[np.zeros_like(w, dtype=np.float64) for w in weights],
            second_moment=[np.zeros_like(w, dtype=np.float64) for w in weights],
        )

    step = state.step + 1
    correction1 = 1.0 - beta1**step
    correction2 = 1.0 - beta2**step
    updated: List[np.ndarray] = []
    first: List[np.ndarray] = []
    second: List[np.ndarray] = []
    for weight, grad, m, v in zip(weights, grads, state.first_moment, state.second_moment):
        g = np.zeros_like(weight) if grad is None else grad
        if g.shape != weight.shape:
            raise DimensionError(f"gradient shape {g.shape} != weight shape {weight.shape}")
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        updated.append(weight - learning_rate * m_hat / (np.sqrt(v_hat) + eps))
        first.append(m)
        second.append(v)
    return updated, AdamState(step=step, first_moment=first, second_moment=second)


class Adam:
    """Apply :func:`adam_step` to a list of parameter tensors in place."""

    def __init__(self, parameters: Sequence[Tensor], learning_rate: float = 1e-3) -> None:
        self.parameters = list(parameters)
        self.learning_rate = learning_rate
        self.state = AdamState()

    def step(self) -> None:
        values, self.state = adam_step(
            [tensor.values for tensor in self.parameters],
            [tensor.grad for tensor in self.parameters],
            self.state,
            self.learning_rate,
        )
        for tensor, value in zip(self.parameters, values):
            tensor.values = value

    def zero_grad(self) -> None:
        for tensor in self.parameters:
            tensor.zero_grad()
