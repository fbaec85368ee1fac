"""Training hyper-parameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict

from utils.errors import ConfigError


@dataclass(frozen=True)
class TrainConfig:
    """Hyper-parameters for one training run; `validate` raises ConfigError on bad values."""

    beta: float = 0.1
    weight_decay: float = 0.0005
    learning_rate: float = 0.001
    radius_update_interval: int = 10
    max_epochs: int = 5000
    patience: int = 100
    dropout_rate: float = 0.5
    seed: int = 0

    def validate(self) -> "TrainConfig":
        if not 0.0 < self.beta <= 1.0:
            raise ConfigError(f"beta must be in (0, 1], got {self.beta}")
        if self.weight_decay < 0.0:
            raise ConfigError(f"weight decay must be non-negative, got {self.weight_decay}")
        if self.learning_rate <= 0.0:
            raise ConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if self.radius_update_interval < 1:
            raise ConfigError("the radius update interval must be at least 1 epoch")
        if self.max_epochs < 1:
            raise ConfigError("max_epochs must be at least 1")
        if not 0 <= self.patience <= self.max_epochs:
            raise ConfigError(f"patience must be in 0..max_epochs, got {self.patience}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout rate must be in [0, 1), got {self.dropout_rate}")
        return self

    def with_seed(self, seed: int) -> "TrainConfig":
        return replace(self, seed=int(seed))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "TrainConfig":
        known = {name: payload[name] for name in cls.__dataclass_fields__ if name in payload}
        return cls(**known).validate()
