"""Shared argparse option groups.

Every option defaults to ``None`` so ``build_run_config`` can tell a flag that
was given from one that was not and fall back to the config file.
"""

from __future__ import annotations

import argparse


def add_config_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON file with option values")


def add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("graph")
    group.add_argument("--features", default=None, help="content file, .csv or feature file")
    group.add_argument("--edges", default=None, help="cites file or .npz adjacency")
    group.add_argument("--labels", default=None, help="optional node,label file")
    group.add_argument(
        "--drop-dangling-edges",
        dest="drop_dangling_edges",
        action="store_true",
        default=None,
        help="drop edges that reference unknown nodes instead of failing",
    )


def add_split_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("split")
    group.add_argument("--normal-class", dest="normal_class", default=None)
    group.add_argument("--ratios", default=None, help="train,val,test fractions of the normal class")
    group.add_argument("--seed", type=int, default=None)


def add_training_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training")
    group.add_argument(
        "--layer",
        dest="layers",
        action="append",
        default=None,
        metavar="KIND:DIM",
        help="encoder layer, repeatable (gcn, sage-mean, sage-pool)",
    )
    group.add_argument("--beta", type=float, default=None)
    group.add_argument("--lambda", dest="weight_decay", type=float, default=None)
    group.add_argument("--lr", dest="learning_rate", type=float, default=None)
    group.add_argument("--dropout", dest="dropout_rate", type=float, default=None)
    group.add_argument("--phi", dest="radius_update_interval", type=int, default=None)
    group.add_argument("--max-epochs", dest="max_epochs", type=int, default=None)
    group.add_argument("--patience", type=int, default=None)


__all__ = [
    "add_config_argument",
    "add_graph_arguments",
    "add_split_arguments",
    "add_training_arguments",
]
