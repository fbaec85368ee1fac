import argparse
import logging
from abc import ABC
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from modules.graph.loader import load_graph
from modules.graph.types import AttributedGraph
from utils.config import EngineSettings, RunConfig, build_run_config, load_config_file


@dataclass
class CommandContext:
    """What a subcommand handler receives: its name and the parsed flags."""

    command: str
    namespace: argparse.Namespace
    data: Dict[str, Any] = field(default_factory=dict)


class CommandModule(ABC):
    """
    Base class for command modules.

    A module contributes one or more subcommands to the CLI through
    ``register``; each subcommand's handler takes a ``CommandContext`` and
    returns a process exit code.
    """

    required_services = ["settings"]

    def __init__(self, name: str, priority: int = 100):
        self.name: str = name
        self.priority: int = priority
        self.enabled: bool = True
        self.settings: Optional[EngineSettings] = None
        logging.debug("Initialised command module '%s' with priority %s", name, priority)

    def register(self, subparsers) -> None:
        """Add subcommands to the parser. Override in subclasses."""
        logging.debug("Module '%s' register() not overridden; skipping", self.name)

    def on_startup(self, container) -> None:
        """Called once every module has registered its subcommands."""
        return None

    def on_shutdown(self) -> None:
        """Called after the command has finished."""
        return None

    def enable(self):
        logging.debug("Module '%s' enabled", self.name)
        self.enabled = True

    def disable(self):
        logging.debug("Module '%s' disabled", self.name)
        self.enabled = False

    @property
    def threads(self) -> int:
        return self.settings.threads if self.settings is not None else 1

    def run_config(self, context: CommandContext) -> RunConfig:
        file_values = load_config_file(getattr(context.namespace, "config", None))
        return build_run_config(context.namespace, file_values)

    def load_graph(self, config: RunConfig) -> AttributedGraph:
        config.require("features", "edges")
        return load_graph(
            config.features,
            config.edges,
            config.labels,
            drop_dangling=config.drop_dangling_edges,
        )
