"""Logging configuration helpers."""

from __future__ import annotations

import json
import logging
import logging.config
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


_RESERVED_ATTRIBUTES = frozenset(
    logging.LogRecord("", logging.INFO, "", 0, "", None, None).__dict__
) | {"message", "asctime"}


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if hasattr(value, "item") and callable(value.item):
        try:
            return _jsonable(value.item())
        except (TypeError, ValueError):
            pass
    return str(value)


class JsonFormatter(logging.Formatter):
    """Serialize log records, including ``extra=`` fields, into JSON lines."""

    def format(self, record: logging.LogRecord) -> str:
        base: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc)
            .isoformat()
            .replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        extras = {
            key: _jsonable(value)
            for key, value in record.__dict__.items()
            if key not in _RESERVED_ATTRIBUTES and not key.startswith("_")
        }
        if extras:
            base["extra"] = extras
        if record.exc_info:
            base["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info:
            base["stack_info"] = record.stack_info
        return json.dumps(base, ensure_ascii=False)


def configure_logging(
    log_dir: Optional[Path], *, level: str = "INFO", file_logging: bool = True
) -> None:
    """Console output on stderr; optional rotating text, ``latest.log`` and JSONL files.

    Stdout stays free for command output (CSV rows, reports).
    """

    handlers: Dict[str, Dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "console",
            "stream": "ext://sys.stderr",
            "level": level,
        },
    }

    paths: Dict[str, Path] = {}
    if file_logging and log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        paths = {
            "text": log_dir / f"{timestamp}.log",
            "json": log_dir / f"{timestamp}.jsonl",
            "latest": log_dir / "latest.log",
        }
        handlers.update(
            {
                "file": {
                    "class": "logging.handlers.RotatingFileHandler",
                    "formatter": "detailed",
                    "filename": str(paths["text"]),
                    "maxBytes": 5 * 1024 * 1024,
                    "backupCount": 5,
                    "encoding": "utf-8",
                    "level": "DEBUG",
                },
                "latest": {
                    "class": "logging.FileHandler",
                    "formatter": "detailed",
                    "filename": str(paths["latest"]),
                    "mode": "w",
                    "encoding": "utf-8",
                    "level": "DEBUG",
                },
                "json": {
                    "class": "logging.handlers.RotatingFileHandler",
                    "formatter": "json",
                    "filename": str(paths["json"]),
                    "maxBytes": 5 * 1024 * 1024,
                    "backupCount": 3,
                    "encoding": "utf-8",
                    "level": "INFO",
                },
            }
        )

    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "console": {
                    "format": "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
                },
                "detailed": {
                    "format": "%(asctime)s | %(levelname)-8s | %(name)s | %(threadName)s | %(message)s",
                },
                "json": {
                    "()": JsonFormatter,
                },
            },
            "handlers": handlers,
            "root": {
                "handlers": list(handlers),
                "level": "DEBUG" if paths else level,
            },
        }
    )

    if paths:
        logging.getLogger(__name__).debug(
            "Logging configured: text=%s latest=%s json=%s",
            paths["text"],
            paths["latest"],
            paths["json"],
        )
    else:
        logging.getLogger(__name__).debug("Logging configured: console only")


__all__ = ["JsonFormatter", "configure_logging"]
