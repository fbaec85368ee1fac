"""Dense matrices with a define-by-run gradient tape.

Every differentiable primitive in :mod:`modules.autodiff.ops` appends a
record to the :class:`Tape` it runs on. :meth:`Tape.backward` walks those
records in exact reverse execution order and accumulates vector-Jacobian
products into ``Tensor.grad``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DimensionError, TapeError


logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """A 2-D float64 matrix, optionally tracked for gradients."""

    __slots__ = ("values", "requires_grad", "grad", "name", "_tape")

    def __init__(
        self,
        values,
        *,
        requires_grad: bool = False,
        name: Optional[str] = None,
    ) -> None:
        array = np.asarray(values, dtype=np.float64)
        if array.ndim != 2:
            raise DimensionError(f"tensors are 2-D, got shape {array.shape}")
        self.values: np.ndarray = array
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self._tape: Optional["Tape"] = None

    @classmethod
    def parameter(cls, values, name: Optional[str] = None) -> "Tensor":
        return cls(values, requires_grad=True, name=name)

    @classmethod
    def constant(cls, values, name: Optional[str] = None) -> "Tensor":
        return cls(values, requires_grad=False, name=name)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]

    def item(self) -> float:
        if self.shape != (1, 1):
            raise DimensionError(f"item() needs a 1x1 tensor, got {self.shape}")
        return float(self.values[0, 0])

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


@dataclass
class _Record:
    op: str
    output: Tensor
    inputs: Tuple[Tensor, ...]
    backward: BackwardFn


class Tape:
    """Ordered record of executed operations for one forward/backward pass.

    A tape belongs to a single thread. Build a fresh tape for every training
    step; :meth:`inference` returns a tape that computes values without
    recording anything.
    """

    def __init__(self, *, recording: bool = True) -> None:
        self.recording = recording
        self._records: List[_Record] = []
        self._consumed = False

    @classmethod
    def inference(cls) -> "Tape":
        return cls(recording=False)

    def __len__(self) -> int:
        return len(self._records)

    @property
    def operations(self) -> List[str]:
        return [record.op for record in self._records]

    def record(
        self,
        op: str,
        values: np.ndarray,
        inputs: Sequence[Tensor],
        backward: BackwardFn,
    ) -> Tensor:
        requires_grad = self.recording and any(tensor.requires_grad for tensor in inputs)
        output = Tensor(values, requires_grad=requires_grad)
        if requires_grad:
            output._tape = self
            self._records.append(_Record(op, output, tuple(inputs), backward))
        return output

    def backward(self, loss: Tensor) -> "Tape":
        """Populate ``grad`` on every tracked tensor reachable from ``loss``."""

        if loss.shape != (1, 1):
            raise DimensionError(f"backward() needs a scalar (1x1) loss, got {loss.shape}")
        if loss._tape is not self:
            raise TapeError("loss was not produced on this tape")
        if self._consumed:
            raise TapeError("backward() already ran on this tape; call reset() first")
        self._consumed = True

        pending: Dict[int, np.ndarray] = {id(loss): np.ones((1, 1), dtype=np.float64)}
        leaves: Dict[int, Tensor] = {}
        for record in reversed(self._records):
            upstream = pending.pop(id(record.output), None)
            if upstream is None:
                continue
            record.output.grad = upstream
            input_grads = record.backward(upstream)
            for tensor, contribution in zip(record.inputs, input_grads):
                if contribution is None or not tensor.requires_grad:
                    continue
                key = id(tensor)
                if tensor._tape is not self:
                    leaves[key] = tensor
                if key in pending:
                    pending[key] = pending[key] + contribution
                else:
                    pending[key] = contribution

        for key, tensor in leaves.items():
            contribution = pending.pop(key)
            tensor.grad = contribution if tensor.grad is None else tensor.grad + contribution

        logger.debug("Backward pass over %s recorded operations", len(self._records))
        return self

    def reset(self) -> None:
        """Clear gradients of recorded tensors and allow another backward pass."""

        for record in self._records:
            record.output.grad = None
            for tensor in record.inputs:
                tensor.grad = None
        self._consumed = False


__all__ = ["Tensor", "Tape"]
