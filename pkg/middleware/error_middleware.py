"""Translate exceptions escaping a command into exit codes."""

from __future__ import annotations

import logging
import sys
from typing import Callable

from modules.base import CommandContext
from utils.errors import OcgraphError


EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130


class ErrorMiddleware:
    """Outermost middleware: prints a one-line ``error:`` message on stderr."""

    def __call__(self, handler: Callable[[CommandContext], int], context: CommandContext) -> int:
        logger = logging.getLogger("middleware.errors")
        try:
            return int(handler(context) or EXIT_OK)
        except OcgraphError as exc:
            logger.error("%s failed: %s", context.command, exc, extra={"command": context.command})
            print(f"error: {exc}", file=sys.stderr)
            return exc.exit_code
        except OSError as exc:
            logger.error("%s failed with an I/O error: %s", context.command, exc)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        except KeyboardInterrupt:
            logger.info("%s interrupted by user", context.command)
            return EXIT_INTERRUPTED
