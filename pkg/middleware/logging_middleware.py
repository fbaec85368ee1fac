"""Command start/finish logging middleware."""

from __future__ import annotations

import logging
import time
from typing import Callable

from modules.base import CommandContext
from utils.errors import OcgraphError


class LoggingMiddleware:
    """Log each command and its outcome with structured metadata."""

    def __call__(self, handler: Callable[[CommandContext], int], context: CommandContext) -> int:
        logger = logging.getLogger("middleware.logging")
        logger.info("command started", extra={"command": context.command})
        started = time.perf_counter()
        try:
            exit_code = handler(context)
        except OcgraphError as exc:
            logger.debug(
                "command failed",
                extra={
                    "command": context.command,
                    "error": type(exc).__name__,
                    "seconds": round(time.perf_counter() - started, 3),
                },
            )
            raise
        except Exception:
            logger.exception("command raised exception", extra={"command": context.command})
            raise
        logger.info(
            "command finished",
            extra={
                "command": context.command,
                "exit_code": exit_code,
                "seconds": round(time.perf_counter() - started, 3),
            },
        )
        return exit_code
