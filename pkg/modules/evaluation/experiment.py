"""Multi-seed experiments and their reports."""

from __future__ import annotations

import csv
import json
import logging
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from modules.evaluation.metrics import roc_auc
from modules.graph.normalize import normalize_adjacency
from modules.graph.split import DEFAULT_RATIOS, make_one_class_split
from modules.graph.types import AttributedGraph, NormalizedAdjacency
from modules.layers.specs import LayerSpec
from modules.ocgnn.config import TrainConfig
from modules.ocgnn.trainer import train
from utils.errors import ConfigError, OcgraphError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeedResult:
    seed: int
    test_auc: Optional[float]
    val_auc: Optional[float]
    best_epoch: int
    epochs: int
    radius: Optional[float]
    seconds: float
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentReport:
    normal_class: str
    architecture: List[str]
    results: List[SeedResult] = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def successful(self) -> List[SeedResult]:
        return [result for result in self.results if result.ok]

    @property
    def mean_auc(self) -> float:
        values = [result.test_auc for result in self.successful]
        return float(statistics.fmean(values)) if values else float("nan")

    @property
    def std_auc(self) -> float:
        """Sample (n − 1) standard deviation; 0 for a single seed."""

        values = [result.test_auc for result in self.successful]
        if len(values) < 2:
            return 0.0 if values else float("nan")
        return float(statistics.stdev(values))

    def to_dict(self, *, include_timing: bool = True) -> Dict[str, Any]:
        rows = []
        for result in self.results:
            row: Dict[str, Any] = {
                "seed": result.seed,
                "test_auc": result.test_auc,
                "val_auc": result.val_auc,
                "best_epoch": result.best_epoch,
                "epochs": result.epochs,
                "radius": result.radius,
                "error": result.error,
            }
            if include_timing:
                row["seconds"] = round(result.seconds, 3)
            rows.append(row)
        payload: Dict[str, Any] = {
            "normal_class": self.normal_class,
            "architecture": list(self.architecture),
            "mean_auc": _finite_or_none(self.mean_auc),
            "std_auc": _finite_or_none(self.std_auc),
            "succeeded": len(self.successful),
            "failed": len(self.results) - len(self.successful),
            "seeds": rows,
        }
        if include_timing:
            payload["wall_seconds"] = round(self.wall_seconds, 3)
        return payload

    def format_table(self) -> str:
        header = ("seed", "test AUC %", "val AUC %", "best epoch", "epochs", "seconds", "status")
        body = []
        for result in self.results:
            body.append(
                (
                    str(result.seed),
                    _percent(result.test_auc),
                    _percent(result.val_auc),
                    str(result.best_epoch),
                    str(result.epochs),
                    f"{result.seconds:.1f}",
                    "ok" if result.ok else f"failed: {result.error}",
                )
            )
        widths = [max(len(row[column]) for row in [header, *body]) for column in range(len(header))]
        lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in [header, *body]]
        lines.insert(1, "  ".join("-" * width for width in widths))
        lines.append("")
        lines.append(
            f"{' / '.join(self.architecture)} on '{self.normal_class}': "
            f"AUC {_percent(self.mean_auc)} ± {_percent(self.std_auc)} "
            f"over {len(self.successful)} seeds ({self.wall_seconds:.1f}s)"
        )
        return "\n".join(lines)

    def write_json(self, path: Union[str, Path], *, include_timing: bool = True) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        text = json.dumps(self.to_dict(include_timing=include_timing), indent=2, sort_keys=True)
        target.write_text(text + "\n", encoding="utf-8")
        return target

    def write_csv(self, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["seed", "test_auc", "val_auc", "best_epoch", "epochs", "radius", "seconds", "error"])
            for result in self.results:
                writer.writerow(
                    [
                        result.seed,
                        "" if result.test_auc is None else repr(result.test_auc),
                        "" if result.val_auc is None else repr(result.val_auc),
                        result.best_epoch,
                        result.epochs,
                        "" if result.radius is None else repr(result.radius),
                        f"{result.seconds:.3f}",
                        result.error or "",
                    ]
                )
        return target


def run_experiment(
    graph: AttributedGraph,
    split_seeds: Sequence[int],
    specs: Sequence[LayerSpec],
    config: TrainConfig,
    *,
    normal_class: str,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    adjacency: Optional[NormalizedAdjacency] = None,
    max_workers: int = 1,
) -> ExperimentReport:
    """Train and evaluate one model per seed.

    The seed drives both the split and the weight initialisation. Seeds may
    run concurrently; results are reported in the order given. A seed that
    raises is recorded with its error and excluded from the summary.
    """

    seeds = [int(seed) for seed in split_seeds]
    if not seeds:
        raise ConfigError("an experiment needs at least one seed")
    adjacency = adjacency if adjacency is not None else normalize_adjacency(graph)
    started = time.perf_counter()

    def run_one(seed: int) -> SeedResult:
        begin = time.perf_counter()
        try:
            split = make_one_class_split(graph, normal_class, ratios, seed)
            model = train(graph, adjacency, split, specs, config.with_seed(seed))
            test_scores = model.score(graph, adjacency, split.test_ids)
            test_auc = roc_auc(test_scores, split.test_labels)
        except OcgraphError as exc:
            logger.error("Seed %s failed: %s", seed, exc, extra={"seed": seed})
            return SeedResult(seed, None, None, 0, 0, None, time.perf_counter() - begin, str(exc))
        logger.info("Seed %s test AUC %.4f", seed, test_auc, extra={"seed": seed, "val_auc": model.best_val_auc})
        return SeedResult(
            seed=seed,
            test_auc=test_auc,
            val_auc=_finite_or_none(model.best_val_auc),
            best_epoch=model.best_epoch,
            epochs=len(model.history),
            radius=model.sphere.radius,
            seconds=time.perf_counter() - begin,
        )

    workers = max(1, min(int(max_workers), len(seeds)))
    if workers == 1:
        results = [run_one(seed) for seed in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="seed") as executor:
            results = list(executor.map(run_one, seeds))

    report = ExperimentReport(
        normal_class=str(normal_class),
        architecture=[f"{spec.kind.value}:{spec.out_dim}" for spec in specs],
        results=results,
        wall_seconds=time.perf_counter() - started,
    )
    logger.info(
        "Experiment finished: AUC %.4f ± %.4f over %s seeds",
        report.mean_auc,
        report.std_auc,
        len(report.successful),
    )
    return report


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _percent(value: Optional[float]) -> str:
    if value is None or not math.isfinite(value):
        return "n/a"
    return f"{100.0 * value:.2f}"


__all__ = ["SeedResult", "ExperimentReport", "run_experiment"]
