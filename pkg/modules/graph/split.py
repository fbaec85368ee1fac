"""One-class train/validation/test splits and their JSON representation."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np

from modules.graph.types import AttributedGraph, OneClassSplit
from utils.errors import (
    ConfigError,
    GraphValidationError,
    SplitCapacityError,
    ValidationError,
)


logger = logging.getLogger(__name__)

DEFAULT_RATIOS: Tuple[float, float, float] = (0.60, 0.15, 0.25)
_CUT_TOLERANCE = 1e-9


def make_one_class_split(
    graph: AttributedGraph,
    normal_class: str,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> OneClassSplit:
    """Partition the normal class by ``ratios`` and balance val/test with anomalies.

    Normal nodes are permuted with ``seed`` and cut at ``⌊r_train·n⌋`` and
    ``⌊(r_train + r_val)·n⌋``. Validation and test then receive as many
    anomalous nodes as they hold normal ones, drawn without replacement from
    every other class.
    """

    train_ratio, val_ratio, _ = _check_ratios(ratios)
    if not graph.has_labels:
        raise GraphValidationError("the graph has no class labels; a one-class split needs them")
    normal_code = graph.class_id(normal_class)
    normal_class = graph.class_names[normal_code]

    rng = np.random.default_rng(seed)
    normal_nodes = np.flatnonzero(graph.labels == normal_code)
    anomalous_nodes = np.flatnonzero(graph.labels != normal_code)
    permuted = rng.permutation(normal_nodes)

    n = permuted.size
    first_cut = math.floor(train_ratio * n + _CUT_TOLERANCE)
    second_cut = math.floor((train_ratio + val_ratio) * n + _CUT_TOLERANCE)
    train = permuted[:first_cut]
    val_normal = permuted[first_cut:second_cut]
    test_normal = permuted[second_cut:]

    required = val_normal.size + test_normal.size
    if train.size == 0:
        raise SplitCapacityError(f"class '{normal_class}' has too few nodes ({n}) for a training set")
    if anomalous_nodes.size < required:
        raise SplitCapacityError(
            f"{anomalous_nodes.size} anomalous nodes available, {required} needed "
            f"to balance validation and test"
        )

    sampled = rng.choice(anomalous_nodes, size=required, replace=False)
    val_anomalous = sampled[: val_normal.size]
    test_anomalous = sampled[val_normal.size :]

    val_ids, val_labels = _balanced(rng, val_normal, val_anomalous)
    test_ids, test_labels = _balanced(rng, test_normal, test_anomalous)

    split = OneClassSplit(
        train_ids=tuple(int(node) for node in train),
        val_ids=val_ids,
        val_labels=val_labels,
        test_ids=test_ids,
        test_labels=test_labels,
        seed=int(seed),
        normal_class=str(normal_class),
        ratios=(float(ratios[0]), float(ratios[1]), float(ratios[2])),
    )
    logger.info(
        "One-class split for '%s': %s/%s/%s (seed=%s)",
        normal_class,
        *split.sizes,
        seed,
        extra={"seed": seed, "normal_class": str(normal_class)},
    )
    return split


def save_split(split: OneClassSplit, path: Union[str, Path], *, num_nodes: int) -> Path:
    """Write the split as JSON; the output is byte-identical for equal splits."""

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "train": list(split.train_ids),
        "val": [[node, label] for node, label in zip(split.val_ids, split.val_labels)],
        "test": [[node, label] for node, label in zip(split.test_ids, split.test_labels)],
        "seed": split.seed,
        "normal_class": split.normal_class,
        "ratios": list(split.ratios),
        "num_nodes": int(num_nodes),
    }
    target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug("Split written to %s", target)
    return target


def load_split(path: Union[str, Path], graph: AttributedGraph | None = None) -> OneClassSplit:
    source = Path(path)
    if not source.is_file():
        raise ValidationError(f"split file not found: {source}")
    try:
        payload = json.loads(source.read_text(encoding="utf-8"))
        split = OneClassSplit(
            train_ids=tuple(int(node) for node in payload["train"]),
            val_ids=tuple(int(node) for node, _ in payload["val"]),
            val_labels=tuple(int(label) for _, label in payload["val"]),
            test_ids=tuple(int(node) for node, _ in payload["test"]),
            test_labels=tuple(int(label) for _, label in payload["test"]),
            seed=int(payload["seed"]),
            normal_class=str(payload.get("normal_class", "")),
            ratios=tuple(float(value) for value in payload.get("ratios", DEFAULT_RATIOS)),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{source}: malformed split file ({exc})") from None

    if graph is not None:
        recorded = payload.get("num_nodes")
        if recorded is not None and int(recorded) != graph.num_nodes:
            raise ValidationError(
                f"{source}: split was built for {recorded} nodes, graph has {graph.num_nodes}"
            )
        every_id = split.train_ids + split.val_ids + split.test_ids
        if every_id and (min(every_id) < 0 or max(every_id) >= graph.num_nodes):
            raise ValidationError(f"{source}: split references nodes outside the graph")
    return split


def _check_ratios(ratios: Sequence[float]) -> Tuple[float, float, float]:
    if len(ratios) != 3:
        raise ConfigError("ratios must have exactly three entries (train, val, test)")
    values = tuple(float(value) for value in ratios)
    if any(value <= 0 for value in values):
        raise ConfigError(f"ratios must be positive, got {values}")
    if not math.isclose(sum(values), 1.0, abs_tol=1e-6):
        raise ConfigError(f"ratios must sum to 1, got {sum(values):.6f}")
    return values  # type: ignore[return-value]


def _balanced(
    rng: np.random.Generator, normal: np.ndarray, anomalous: np.ndarray
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    ids = np.concatenate([normal, anomalous])
    labels = np.concatenate(
        [np.zeros(normal.size, dtype=np.int64), np.ones(anomalous.size, dtype=np.int64)]
    )
    order = rng.permutation(ids.size)
    return tuple(int(node) for node in ids[order]), tuple(int(label) for label in labels[order])


__all__ = ["DEFAULT_RATIOS", "make_one_class_split", "save_split", "load_split"]
