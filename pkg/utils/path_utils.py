"""Utilities for resolving the project home directory and output paths."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union


home_dir = ""


def set_home_dir(path: Union[str, Path]) -> None:
    """Set the directory that holds ``modules/`` and the default ``logs/``."""

    global home_dir
    home_dir = str(path)
    logging.getLogger(__name__).debug("Home directory set to %s", home_dir)


def get_home_dir() -> str:
    """Return the configured home directory, defaulting to the project root."""

    if not home_dir:
        return str(Path(__file__).resolve().parent.parent)
    return home_dir


def default_log_dir() -> Path:
    return Path(get_home_dir()) / "logs"


def sibling_with_suffix(path: Union[str, Path], suffix: str) -> Path:
    """``report.json`` -> ``report.csv``; a path without a suffix gets one appended."""

    target = Path(path)
    if target.suffix:
        return target.with_suffix(suffix)
    return target.parent / f"{target.name}{suffix}"
