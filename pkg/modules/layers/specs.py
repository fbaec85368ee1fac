"""Layer descriptions for the graph encoder."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from utils.errors import ConfigError


class LayerKind(str, Enum):
    GCN = "gcn"
    SAGE_MEAN = "sage-mean"
    SAGE_POOL = "sage-pool"

    @property
    def is_sage(self) -> bool:
        return self is not LayerKind.GCN


KIND_ALIASES: Dict[str, LayerKind] = {
    "gcn": LayerKind.GCN,
    "sage": LayerKind.SAGE_POOL,
    "sage-pool": LayerKind.SAGE_POOL,
    "sage_pool": LayerKind.SAGE_POOL,
    "pool": LayerKind.SAGE_POOL,
    "sage-mean": LayerKind.SAGE_MEAN,
    "sage_mean": LayerKind.SAGE_MEAN,
    "mean": LayerKind.SAGE_MEAN,
}


@dataclass(frozen=True)
class LayerSpec:
    kind: LayerKind
    in_dim: int
    out_dim: int
    has_activation: bool = True
    dropout_rate: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "has_activation": self.has_activation,
            "dropout_rate": self.dropout_rate,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LayerSpec":
        return cls(
            kind=parse_kind(payload["kind"]),
            in_dim=int(payload["in_dim"]),
            out_dim=int(payload["out_dim"]),
            has_activation=bool(payload["has_activation"]),
            dropout_rate=float(payload["dropout_rate"]),
        )


def parse_kind(value: str) -> LayerKind:
    kind = KIND_ALIASES.get(str(value).strip().lower())
    if kind is None:
        raise ConfigError(
            f"unknown layer kind '{value}'; expected one of {', '.join(sorted(KIND_ALIASES))}"
        )
    return kind


def parse_layer_arg(value: str) -> Tuple[LayerKind, int]:
    """Parse ``kind:dim`` (for example ``gcn:64``)."""

    kind_text, separator, dim_text = str(value).partition(":")
    if not separator:
        raise ConfigError(f"layer '{value}' must look like kind:dim")
    try:
        dim = int(dim_text)
    except ValueError:
        raise ConfigError(f"layer '{value}' has a non-integer width") from None
    if dim <= 0:
        raise ConfigError(f"layer '{value}' must have a positive width")
    return parse_kind(kind_text), dim


def build_layer_specs(
    input_dim: int,
    layers: Iterable[Tuple[LayerKind, int]],
    *,
    dropout_rate: float = 0.5,
) -> List[LayerSpec]:
    """Chain ``input_dim`` through ``layers``; the last layer has no activation."""

    plan = list(layers)
    specs: List[LayerSpec] = []
    in_dim = int(input_dim)
    for position, (kind, out_dim) in enumerate(plan):
        last = position == len(plan) - 1
        specs.append(
            LayerSpec(
                kind=kind,
                in_dim=in_dim,
                out_dim=int(out_dim),
                has_activation=not last,
                dropout_rate=0.0 if last else float(dropout_rate),
            )
        )
        in_dim = int(out_dim)
    validate_specs(specs)
    return specs


def validate_specs(specs: Sequence[LayerSpec]) -> None:
    if not specs:
        raise ConfigError("at least one layer is required")
    for position, spec in enumerate(specs):
        if spec.in_dim <= 0 or spec.out_dim <= 0:
            raise ConfigError(f"layer {position} has a non-positive width")
        if not 0.0 <= spec.dropout_rate < 1.0:
            raise ConfigError(f"layer {position} dropout rate must be in [0, 1)")
        if position and specs[position - 1].out_dim != spec.in_dim:
            raise ConfigError(
                f"layer {position} expects {spec.in_dim} inputs but layer {position - 1} "
                f"produces {specs[position - 1].out_dim}"
            )
    if specs[-1].has_activation:
        raise ConfigError("the final layer must not have an activation")


__all__ = [
    "LayerKind",
    "LayerSpec",
    "parse_kind",
    "parse_layer_arg",
    "build_layer_specs",
    "validate_specs",
]
