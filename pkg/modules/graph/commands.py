"""``split``: build a one-class split file."""

from __future__ import annotations

import logging

from engine_core.arguments import add_config_argument, add_graph_arguments, add_split_arguments
from modules.base import CommandContext, CommandModule
from modules.graph.split import make_one_class_split, save_split


logger = logging.getLogger(__name__)


class GraphCommands(CommandModule):
    def __init__(self) -> None:
        super().__init__("graph", priority=10)

    def register(self, subparsers) -> None:
        parser = subparsers.add_parser(
            "split", help="build a one-class train/val/test split and write it as JSON"
        )
        add_config_argument(parser)
        add_graph_arguments(parser)
        add_split_arguments(parser)
        parser.add_argument("--out", default=None, help="split file to write")
        parser.set_defaults(handler=self.cmd_split)

    def cmd_split(self, context: CommandContext) -> int:
        config = self.run_config(context)
        config.require("normal_class", "out")
        graph = self.load_graph(config)
        split = make_one_class_split(graph, config.normal_class, config.ratios, config.seed)
        path = save_split(split, config.out, num_nodes=graph.num_nodes)

        train_size, val_size, test_size = split.sizes
        print(f"train={train_size} val={val_size} test={test_size}")
        print(
            f"val anomalies={sum(split.val_labels)} test anomalies={sum(split.test_labels)}"
        )
        logger.info(
            "Split for class '%s' written to %s",
            config.normal_class,
            path,
            extra={"seed": config.seed, "sizes": [train_size, val_size, test_size]},
        )
        return 0


def get_module(container=None) -> GraphCommands:
    return GraphCommands()
