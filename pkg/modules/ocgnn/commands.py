"""``train`` and ``score`` subcommands."""

from __future__ import annotations

import csv
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, TextIO

import numpy as np

from engine_core.arguments import (
    add_config_argument,
    add_graph_arguments,
    add_split_arguments,
    add_training_arguments,
)
from modules.base import CommandContext, CommandModule
from modules.graph.normalize import normalize_adjacency
from modules.graph.split import load_split, make_one_class_split
from modules.ocgnn.checkpoint import load_model, save_model
from modules.ocgnn.trainer import score_nodes, train
from utils.errors import ConfigError, ValidationError


logger = logging.getLogger(__name__)


class OcgnnCommands(CommandModule):
    def __init__(self) -> None:
        super().__init__("ocgnn", priority=20)

    def register(self, subparsers) -> None:
        train_parser = subparsers.add_parser("train", help="train a model and write a checkpoint")
        add_config_argument(train_parser)
        add_graph_arguments(train_parser)
        add_split_arguments(train_parser)
        add_training_arguments(train_parser)
        train_parser.add_argument("--split", default=None, help="split file from 'split'")
        train_parser.add_argument("--checkpoint", default=None, help="checkpoint file to write")
        train_parser.set_defaults(handler=self.cmd_train)

        score_parser = subparsers.add_parser("score", help="score nodes with a trained model")
        add_config_argument(score_parser)
        add_graph_arguments(score_parser)
        score_parser.add_argument("--checkpoint", default=None, help="checkpoint to load")
        score_parser.add_argument("--nodes", default=None, help="comma separated node indices")
        score_parser.add_argument(
            "--all", dest="all_nodes", action="store_true", default=None, help="score every node"
        )
        score_parser.add_argument("--out", default=None, help="CSV file (default: stdout)")
        score_parser.set_defaults(handler=self.cmd_score)

    def cmd_train(self, context: CommandContext) -> int:
        config = self.run_config(context)
        config.require("checkpoint")
        if config.split is None and config.normal_class is None:
            raise ConfigError("train needs --split or --normal-class")

        graph = self.load_graph(config)
        if config.split is not None:
            split = load_split(config.split, graph)
        else:
            split = make_one_class_split(graph, config.normal_class, config.ratios, config.seed)

        specs = config.layer_specs(graph.num_features)
        model = train(graph, normalize_adjacency(graph), split, specs, config.train_config())
        save_model(model, config.checkpoint)

        print(f"best epoch: {model.best_epoch} of {len(model.history)}")
        print(f"val AUC: {model.best_val_auc:.4f}")
        print(f"radius: {model.sphere.radius:.6g}")
        return 0

    def cmd_score(self, context: CommandContext) -> int:
        config = self.run_config(context)
        config.require("checkpoint")
        if config.nodes is None and not config.all_nodes:
            raise ConfigError("score needs --nodes or --all")
        if config.nodes is not None and config.all_nodes:
            raise ConfigError("--nodes and --all are mutually exclusive")

        model = load_model(config.checkpoint)
        graph = self.load_graph(config)
        if config.all_nodes:
            ids = np.arange(graph.num_nodes, dtype=np.int64)
        else:
            ids = np.asarray(config.nodes, dtype=np.int64)
            if ids.min() < 0 or ids.max() >= graph.num_nodes:
                raise ValidationError(
                    f"node ids must be in 0..{graph.num_nodes - 1}"
                )

        scores = score_nodes(model, graph, normalize_adjacency(graph), ids)
        with _output(config.out) as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(["node_id", "node", "score", "is_anomalous"])
            for node, score in zip(ids.tolist(), scores.tolist()):
                writer.writerow([node, graph.node_name(node), repr(score), int(score > 0.0)])

        logger.info(
            "Scored %s nodes, %s flagged anomalous",
            ids.size,
            int(np.sum(scores > 0.0)),
            extra={"command": context.command},
        )
        return 0


@contextmanager
def _output(path: Optional[Path]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        yield handle


def get_module(container=None) -> OcgnnCommands:
    return OcgnnCommands()
