"""``eval`` and ``experiment`` subcommands."""

from __future__ import annotations

import json
import logging

from engine_core.arguments import (
    add_config_argument,
    add_graph_arguments,
    add_split_arguments,
    add_training_arguments,
)
from modules.base import CommandContext, CommandModule
from modules.evaluation.experiment import run_experiment
from modules.evaluation.metrics import confusion_counts, roc_auc
from modules.graph.normalize import normalize_adjacency
from modules.graph.split import load_split
from modules.ocgnn.checkpoint import load_model
from modules.ocgnn.trainer import score_nodes
from utils.errors import ConfigError
from utils.path_utils import sibling_with_suffix


logger = logging.getLogger(__name__)


class EvaluationCommands(CommandModule):
    def __init__(self) -> None:
        super().__init__("evaluation", priority=30)

    def register(self, subparsers) -> None:
        eval_parser = subparsers.add_parser("eval", help="ROC-AUC and counts on a split's test set")
        add_config_argument(eval_parser)
        add_graph_arguments(eval_parser)
        eval_parser.add_argument("--checkpoint", default=None)
        eval_parser.add_argument("--split", default=None)
        eval_parser.add_argument("--out", default=None, help="optional JSON metrics file")
        eval_parser.set_defaults(handler=self.cmd_eval)

        experiment_parser = subparsers.add_parser(
            "experiment", help="train and evaluate over several split seeds"
        )
        add_config_argument(experiment_parser)
        add_graph_arguments(experiment_parser)
        add_split_arguments(experiment_parser)
        add_training_arguments(experiment_parser)
        experiment_parser.add_argument("--seeds", type=int, default=None, help="number of seeds")
        experiment_parser.add_argument("--out", default=None, help="JSON report (a .csv is written alongside)")
        experiment_parser.set_defaults(handler=self.cmd_experiment)

    def cmd_eval(self, context: CommandContext) -> int:
        config = self.run_config(context)
        config.require("checkpoint", "split")
        model = load_model(config.checkpoint)
        graph = self.load_graph(config)
        split = load_split(config.split, graph)

        scores = score_nodes(model, graph, normalize_adjacency(graph), split.test_ids)
        auc = roc_auc(scores, split.test_labels)
        counts = confusion_counts(scores, split.test_labels, threshold=0.0)

        print(f"test AUC: {auc:.4f}")
        print(
            f"tp={counts.true_positive} fp={counts.false_positive} "
            f"tn={counts.true_negative} fn={counts.false_negative}"
        )
        if config.out is not None:
            config.out.parent.mkdir(parents=True, exist_ok=True)
            payload = {"test_auc": auc, "counts": counts.to_dict(), "test_size": len(split.test_ids)}
            config.out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("Test AUC %.4f", auc, extra={"command": context.command, "auc": auc})
        return 0

    def cmd_experiment(self, context: CommandContext) -> int:
        config = self.run_config(context)
        config.require("normal_class")
        if config.seeds < 1:
            raise ConfigError("--seeds must be at least 1")
        graph = self.load_graph(config)
        seeds = list(range(config.seed, config.seed + config.seeds))

        report = run_experiment(
            graph,
            seeds,
            config.layer_specs(graph.num_features),
            config.train_config(),
            normal_class=config.normal_class,
            ratios=config.ratios,
            max_workers=self.threads,
        )
        print(report.format_table())
        if config.out is not None:
            json_path = config.out
            if json_path.suffix.lower() == ".csv":
                json_path = sibling_with_suffix(json_path, ".json")
            report.write_json(json_path)
            csv_path = report.write_csv(sibling_with_suffix(json_path, ".csv"))
            logger.info("Report written to %s and %s", json_path, csv_path)
        return 0 if report.successful else 1


def get_module(container=None) -> EvaluationCommands:
    return EvaluationCommands()
