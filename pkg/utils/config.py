"""Configuration helpers for ocgraph.

Two layers live here: process-level ``EngineSettings`` read from the
environment (and an optional ``.env`` file), and the per-invocation
``RunConfig`` merged from command-line flags, a JSON config file and
built-in defaults.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from dotenv import find_dotenv, load_dotenv

from modules.layers.specs import LayerKind, LayerSpec, build_layer_specs, parse_layer_arg
from modules.ocgnn.config import TrainConfig
from utils.errors import ConfigError


if sys.version_info >= (3, 10):
    def _settings_dataclass(cls):
        return dataclass(cls, slots=True)
else:
    def _settings_dataclass(cls):
        return dataclass(cls)


@_settings_dataclass
class EngineSettings:
    """Runtime settings loaded from the environment."""

    log_level: str = "INFO"
    threads: int = 1
    log_dir: Optional[Path] = None
    log_files: bool = True


def _load_env_file() -> None:
    """Load variables from a .env file when available."""

    env_file = find_dotenv(usecwd=True)
    if env_file:
        load_dotenv(env_file)
        logging.getLogger(__name__).debug("Loaded environment variables from %s", env_file)
    else:
        logging.getLogger(__name__).debug("No .env file discovered; using process environment")


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a positive integer, got '{raw}'") from None
    if value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value}")
    return value


def _flag(name: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off", ""}:
        return False
    raise ConfigError(f"{name} must be a boolean flag, got '{raw}'")


def load_settings(*, use_env_file: bool = True) -> EngineSettings:
    """Load settings from the environment, validating every value."""

    if use_env_file:
        _load_env_file()

    level = os.getenv("LOG_LEVEL", "INFO").strip().upper() or "INFO"
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(f"LOG_LEVEL '{level}' is not a logging level")

    log_dir = os.getenv("OCGRAPH_LOG_DIR")
    return EngineSettings(
        log_level=level,
        threads=_positive_int("OCGRAPH_THREADS", os.getenv("OCGRAPH_THREADS", "1")),
        log_dir=Path(log_dir) if log_dir else None,
        log_files=_flag("OCGRAPH_LOG_FILES", os.getenv("OCGRAPH_LOG_FILES", "1")),
    )


DEFAULT_LAYERS: Tuple[str, ...] = ("gcn:64", "gcn:64", "gcn:32")


@dataclass
class RunConfig:
    """Everything one subcommand needs: inputs, split, architecture and hyper-parameters."""

    features: Optional[Path] = None
    edges: Optional[Path] = None
    labels: Optional[Path] = None
    split: Optional[Path] = None
    normal_class: Optional[str] = None
    ratios: Tuple[float, float, float] = (0.60, 0.15, 0.25)
    seed: int = 0
    layers: List[Tuple[LayerKind, int]] = field(
        default_factory=lambda: [parse_layer_arg(value) for value in DEFAULT_LAYERS]
    )
    beta: float = 0.1
    weight_decay: float = 0.0005
    learning_rate: float = 0.001
    dropout_rate: float = 0.5
    radius_update_interval: int = 10
    max_epochs: int = 5000
    patience: int = 100
    checkpoint: Optional[Path] = None
    out: Optional[Path] = None
    seeds: int = 10
    drop_dangling_edges: bool = False
    nodes: Optional[List[int]] = None
    all_nodes: bool = False

    def train_config(self, seed: Optional[int] = None) -> TrainConfig:
        return TrainConfig(
            beta=self.beta,
            weight_decay=self.weight_decay,
            learning_rate=self.learning_rate,
            radius_update_interval=self.radius_update_interval,
            max_epochs=self.max_epochs,
            patience=self.patience,
            dropout_rate=self.dropout_rate,
            seed=self.seed if seed is None else int(seed),
        ).validate()

    def layer_specs(self, input_dim: int) -> List[LayerSpec]:
        return build_layer_specs(input_dim, self.layers, dropout_rate=self.dropout_rate)

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) in (None, "")]
        if missing:
            flags = ", ".join("--" + _FLAG_NAMES.get(name, name.replace("_", "-")) for name in missing)
            raise ConfigError(f"missing required option(s): {flags}")


_FLAG_NAMES = {
    "weight_decay": "lambda",
    "learning_rate": "lr",
    "dropout_rate": "dropout",
    "radius_update_interval": "phi",
    "layers": "layer",
    "all_nodes": "all",
}

_FILE_ALIASES = {flag.replace("-", "_"): name for name, flag in _FLAG_NAMES.items()}


def parse_ratios(value: Any) -> Tuple[float, float, float]:
    if isinstance(value, str):
        parts: Sequence[Any] = [part for part in value.split(",") if part.strip()]
    else:
        parts = list(value)
    try:
        ratios = tuple(float(part) for part in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"ratios must be three numbers, got '{value}'") from None
    if len(ratios) != 3:
        raise ConfigError(f"ratios must be three numbers a,b,c; got {len(ratios)}")
    return ratios  # type: ignore[return-value]


def parse_node_ids(value: Any) -> List[int]:
    parts = value.split(",") if isinstance(value, str) else list(value)
    try:
        ids = [int(str(part).strip()) for part in parts if str(part).strip()]
    except ValueError:
        raise ConfigError(f"node ids must be integers, got '{value}'") from None
    if not ids:
        raise ConfigError("at least one node id is required")
    return ids


def _parse_layers(value: Any) -> List[Tuple[LayerKind, int]]:
    items: Iterable[Any] = value.split(",") if isinstance(value, str) else value
    layers = [parse_layer_arg(item) for item in items]
    if not layers:
        raise ConfigError("at least one layer is required")
    return layers


def _coerce(name: str, value: Any) -> Any:
    try:
        if name in {"features", "edges", "labels", "split", "checkpoint", "out"}:
            return Path(value)
        if name == "normal_class":
            return str(value)
        if name == "ratios":
            return parse_ratios(value)
        if name == "layers":
            return _parse_layers(value)
        if name == "nodes":
            return parse_node_ids(value)
        if name in {"drop_dangling_edges", "all_nodes"}:
            if isinstance(value, str):
                return _flag(name, value)
            return bool(value)
        if name in {"seed", "radius_update_interval", "max_epochs", "patience", "seeds"}:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise ValueError(value)
            return int(float(value))
        if name in {"beta", "weight_decay", "learning_rate", "dropout_rate"}:
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {name}: {value!r}") from None
    return value


def load_config_file(path: Optional[os.PathLike]) -> Dict[str, Any]:
    """Read a JSON config file; keys are long flag names with dashes or underscores."""

    if path is None:
        return {}
    source = Path(path)
    if not source.is_file():
        raise ConfigError(f"config file not found: {source}")
    try:
        payload = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(payload, dict):
        raise ConfigError(f"{source}: the config file must hold a JSON object")

    known = {item.name for item in fields(RunConfig)}
    values: Dict[str, Any] = {}
    for raw_key, value in payload.items():
        key = str(raw_key).replace("-", "_")
        key = _FILE_ALIASES.get(key, key)
        if key == "layer":
            key = "layers"
        if key not in known:
            raise ConfigError(f"{source}: unknown config key '{raw_key}'")
        values[key] = value
    logging.getLogger(__name__).debug("Loaded %s config values from %s", len(values), source)
    return values


def build_run_config(namespace: Any, file_values: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Merge flags over config-file values over defaults.

    ``namespace`` attributes that are ``None`` (or absent) count as "not given",
    so argparse options must default to ``None``.
    """

    merged: Dict[str, Any] = {}
    file_values = dict(file_values or {})
    for item in fields(RunConfig):
        value = getattr(namespace, item.name, None)
        if value is None or value is False:
            value = file_values.get(item.name, value)
        if value is None:
            continue
        merged[item.name] = _coerce(item.name, value)
    return RunConfig(**merged)


__all__ = [
    "EngineSettings",
    "load_settings",
    "RunConfig",
    "DEFAULT_LAYERS",
    "parse_ratios",
    "parse_node_ids",
    "load_config_file",
    "build_run_config",
]
