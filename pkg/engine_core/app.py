"""The ocgraph command-line application."""

from __future__ import annotations

import argparse
import functools
import logging
from typing import Callable, List, Optional, Sequence

from engine_core.command_loader import CommandLoader
from engine_core.dependency_injector import DependencyContainer
from middleware.error_middleware import EXIT_USAGE, ErrorMiddleware
from middleware.logging_middleware import LoggingMiddleware
from modules.base import CommandContext
from utils.config import EngineSettings


class OcgraphApp:
    """Builds the parser from discovered command modules and dispatches one command."""

    prog = "ocgraph"

    def __init__(self, settings: Optional[EngineSettings] = None, *, modules_dir=None):
        self.settings = settings or EngineSettings()
        self.container = DependencyContainer()
        self.container.register("settings", self.settings)
        self.middlewares: List[Callable] = [ErrorMiddleware(), LoggingMiddleware()]
        self.parser = argparse.ArgumentParser(
            prog=self.prog,
            description="One-class graph neural networks for node anomaly detection.",
        )
        self.subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        self.loader = CommandLoader(self.subparsers, self.container, modules_dir=modules_dir)
        self.loader.load_all_modules()
        logging.getLogger(__name__).debug(
            "Loaded command modules: %s", [item["name"] for item in self.loader.loaded_modules]
        )

    @property
    def commands(self) -> List[str]:
        return sorted(self.subparsers.choices)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            namespace = self.parser.parse_args(argv)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else EXIT_USAGE

        handler = getattr(namespace, "handler", None)
        if handler is None:
            self.parser.print_help()
            return EXIT_USAGE

        context = CommandContext(command=namespace.command, namespace=namespace)
        chain: Callable[[CommandContext], int] = handler
        for middleware in reversed(self.middlewares):
            chain = functools.partial(middleware, chain)
        try:
            return chain(context)
        finally:
            self.loader.shutdown()
