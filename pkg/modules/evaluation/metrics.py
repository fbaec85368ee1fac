"""Rank-based ROC-AUC and threshold counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from utils.errors import DimensionError, MetricError


@dataclass(frozen=True)
class ScoredSet:
    scores: np.ndarray
    labels: np.ndarray

    @classmethod
    def of(cls, scores: Sequence[float], labels: Sequence[int]) -> "ScoredSet":
        score_array = np.asarray(scores, dtype=np.float64).reshape(-1)
        label_array = np.asarray(labels, dtype=np.int64).reshape(-1)
        if score_array.shape != label_array.shape:
            raise DimensionError(
                f"{score_array.size} scores but {label_array.size} labels"
            )
        if np.any((label_array != 0) & (label_array != 1)):
            raise MetricError("labels must be binary (0 = normal, 1 = anomaly)")
        return cls(score_array, label_array)


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Mann–Whitney AUC: P(random anomaly outscores random normal), ties count 0.5."""

    scored = ScoredSet.of(scores, labels)
    positives = scored.labels == 1
    n_pos = int(positives.sum())
    n_neg = scored.labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("ROC-AUC needs at least one normal and one anomalous node")
    ranks = rankdata(scored.scores, method="average")
    u_statistic = float(ranks[positives].sum()) - n_pos * (n_pos + 1) / 2.0
    return u_statistic / (n_pos * n_neg)


@dataclass(frozen=True)
class ConfusionCounts:
    true_positive: int
    false_positive: int
    true_negative: int
    false_negative: int

    @property
    def anomalies(self) -> int:
        return self.true_positive + self.false_negative

    @property
    def normals(self) -> int:
        return self.true_negative + self.false_positive

    def to_dict(self) -> dict:
        return {
            "tp": self.true_positive,
            "fp": self.false_positive,
            "tn": self.true_negative,
            "fn": self.false_negative,
        }


def confusion_counts(
    scores: Sequence[float], labels: Sequence[int], threshold: float = 0.0
) -> ConfusionCounts:
    """Counts with ``score > threshold`` predicted anomalous."""

    scored = ScoredSet.of(scores, labels)
    predicted = scored.scores > threshold
    actual = scored.labels == 1
    return ConfusionCounts(
        true_positive=int(np.sum(predicted & actual)),
        false_positive=int(np.sum(predicted & ~actual)),
        true_negative=int(np.sum(~predicted & ~actual)),
        false_negative=int(np.sum(~predicted & actual)),
    )


__all__ = ["ScoredSet", "roc_auc", "ConfusionCounts", "confusion_counts"]
