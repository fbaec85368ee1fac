"""Central finite differences for checking tape gradients."""

from __future__ import annotations

from typing import Callable

import numpy as np


def numerical_gradient(
    fn: Callable[[], float],
    values: np.ndarray,
    *,
    step: float = 1e-6,
) -> np.ndarray:
    """Estimate ``∂fn/∂values`` by perturbing ``values`` in place, entry by entry.

    ``fn`` must read ``values`` each time it is called; every entry is
    restored before the next one is perturbed.
    """

    grad = np.zeros_like(values, dtype=np.float64)
    flat = values.reshape(-1)
    out = grad.reshape(-1)
    for position in range(flat.size):
        original = flat[position]
        flat[position] = original + step
        upper = fn()
        flat[position] = original - step
        lower = fn()
        flat[position] = original
        out[position] = (upper - lower) / (2.0 * step)
    return grad


def relative_error(expected: np.ndarray, actual: np.ndarray, *, floor: float = 1e-12) -> float:
    """``‖expected − actual‖ / max(‖expected‖, ‖actual‖, floor)``."""

    difference = np.linalg.norm(np.asarray(expected) - np.asarray(actual))
    scale = max(np.linalg.norm(expected), np.linalg.norm(actual), floor)
    return float(difference / scale)


__all__ = ["numerical_gradient", "relative_error"]
