"""Entrypoint for the ocgraph command line."""

from __future__ import annotations

import faulthandler
import logging
import os
import sys
from contextlib import suppress
from pathlib import Path
from typing import Optional, Sequence

from utils import path_utils
from utils.config import EngineSettings, load_settings
from utils.errors import ConfigError
from utils.logging_utils import configure_logging

faulthandler.enable()

_BLAS_THREAD_VARIABLES = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _cap_native_threads(threads: int) -> None:
    """Must run before numpy is first imported."""

    for name in _BLAS_THREAD_VARIABLES:
        os.environ.setdefault(name, str(threads))


def main(settings: EngineSettings, argv: Optional[Sequence[str]] = None) -> int:
    from engine_core.app import OcgraphApp

    return OcgraphApp(settings).run(argv)


def _bootstrap(argv: Optional[Sequence[str]] = None) -> int:
    """Load configuration, configure logging and run one command."""

    project_root = Path(__file__).parent.absolute()
    path_utils.set_home_dir(project_root)
    try:
        settings = load_settings()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    _cap_native_threads(settings.threads)
    configure_logging(
        settings.log_dir or path_utils.default_log_dir(),
        level=settings.log_level,
        file_logging=settings.log_files,
    )

    logger = logging.getLogger(__name__)
    logger.debug("ocgraph starting (threads=%s)", settings.threads)
    try:
        return main(settings, argv)
    except KeyboardInterrupt:
        logger.info("ocgraph interrupted by user")
        return 130
    except Exception:  # pragma: no cover - safety net
        logger.exception("ocgraph stopped due to an unexpected error")
        return 1
    finally:
        for handler in logging.getLogger().handlers:
            with suppress(Exception):
                handler.flush()


if __name__ == "__main__":
    sys.exit(_bootstrap())
