from __future__ import annotations

import argparse
import json
import logging
import os

import pytest

from modules.layers.specs import LayerKind
from utils.config import build_run_config, load_config_file, load_settings, parse_ratios
from utils.errors import ConfigError
from utils.logging_utils import JsonFormatter


@pytest.fixture
def clean_env(monkeypatch):
    for name in ("LOG_LEVEL", "OCGRAPH_THREADS", "OCGRAPH_LOG_DIR", "OCGRAPH_LOG_FILES"):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


def test_settings_defaults(clean_env):
    settings = load_settings(use_env_file=False)

    assert settings.log_level == "INFO"
    assert settings.threads == 1
    assert settings.log_dir is None
    assert settings.log_files is True


def test_settings_from_environment(clean_env, tmp_path):
    clean_env.setenv("LOG_LEVEL", "debug")
    clean_env.setenv("OCGRAPH_THREADS", "4")
    clean_env.setenv("OCGRAPH_LOG_DIR", str(tmp_path))
    clean_env.setenv("OCGRAPH_LOG_FILES", "0")

    settings = load_settings(use_env_file=False)

    assert settings.log_level == "DEBUG"
    assert settings.threads == 4
    assert settings.log_dir == tmp_path
    assert settings.log_files is False


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_invalid_thread_count(clean_env, value):
    clean_env.setenv("OCGRAPH_THREADS", value)

    with pytest.raises(ConfigError, match="OCGRAPH_THREADS"):
        load_settings(use_env_file=False)


def test_invalid_log_level(clean_env):
    clean_env.setenv("LOG_LEVEL", "LOUD")

    with pytest.raises(ConfigError, match="LOG_LEVEL"):
        load_settings(use_env_file=False)


def test_dotenv_file_is_loaded(clean_env, tmp_path):
    clean_env.setattr(os, "environ", dict(os.environ))
    (tmp_path / ".env").write_text("OCGRAPH_THREADS=3\n", encoding="utf-8")
    clean_env.chdir(tmp_path)

    assert load_settings().threads == 3


def test_defaults_without_flags_or_file():
    config = build_run_config(argparse.Namespace())

    assert config.beta == 0.1
    assert config.weight_decay == 0.0005
    assert config.learning_rate == 0.001
    assert config.dropout_rate == 0.5
    assert config.radius_update_interval == 10
    assert config.max_epochs == 5000
    assert config.patience == 100
    assert config.ratios == (0.60, 0.15, 0.25)
    assert config.layers == [(LayerKind.GCN, 64), (LayerKind.GCN, 64), (LayerKind.GCN, 32)]


def test_flags_override_file_values_override_defaults(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps({"beta": 0.3, "lr": 0.05, "max-epochs": 10, "layer": ["sage:16", "gcn:4"]}),
        encoding="utf-8",
    )
    namespace = argparse.Namespace(beta=0.2, learning_rate=None, layers=None)

    config = build_run_config(namespace, load_config_file(path))

    assert config.beta == 0.2
    assert config.learning_rate == 0.05
    assert config.max_epochs == 10
    assert config.weight_decay == 0.0005
    assert config.layers == [(LayerKind.SAGE_POOL, 16), (LayerKind.GCN, 4)]


def test_lambda_alias_and_underscored_keys(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"lambda": 0.0, "normal_class": "Theory"}), encoding="utf-8")

    config = build_run_config(argparse.Namespace(), load_config_file(path))

    assert config.weight_decay == 0.0
    assert config.normal_class == "Theory"


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config_file(tmp_path / "none.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config_file(broken)

    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"temperature": 1}), encoding="utf-8")
    with pytest.raises(ConfigError, match="temperature"):
        load_config_file(unknown)

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError, match="object"):
        load_config_file(listing)


def test_bad_values_are_config_errors():
    with pytest.raises(ConfigError):
        build_run_config(argparse.Namespace(), {"max_epochs": 2.5})
    with pytest.raises(ConfigError):
        build_run_config(argparse.Namespace(), {"beta": "high"})
    with pytest.raises(ConfigError):
        parse_ratios("0.5,0.5")


def test_train_config_validation():
    config = build_run_config(argparse.Namespace(dropout_rate=1.0))

    with pytest.raises(ConfigError, match="dropout"):
        config.train_config()

    config = build_run_config(argparse.Namespace(patience=10, max_epochs=5))
    with pytest.raises(ConfigError, match="patience"):
        config.train_config()


def test_require_names_the_flags():
    config = build_run_config(argparse.Namespace())

    with pytest.raises(ConfigError, match="--checkpoint, --normal-class"):
        config.require("checkpoint", "normal_class")


def test_json_formatter_includes_extra_fields():
    record = logging.LogRecord("ocgraph.test", logging.INFO, __file__, 10, "epoch %s", (3,), None)
    record.epoch = 3
    record.val_auc = float("nan")

    payload = json.loads(JsonFormatter().format(record))

    assert payload["message"] == "epoch 3"
    assert payload["level"] == "INFO"
    assert payload["extra"] == {"epoch": 3, "val_auc": "nan"}
    assert payload["timestamp"].endswith("Z")
