"""Multiclass precision, recall and F1 with support-weighted aggregates.

Zero-denominator cells (a class never predicted, or absent from the
truth) are defined as 0 rather than NaN so weighted aggregates stay
total; classes with zero support contribute weight 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyMatrix, LengthMismatch


@dataclass(frozen=True)
class PRF:
    """Precision/recall/F1 triple, each in [0, 1]."""

    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class IterationRecord:
    """One training-loop iteration as it appears in reports.

    `weighted_f1` is present only when the loop ran with a held-out
    evaluation set; `dropped_features` counts receiving-panel features
    excluded because the cross-view mapping could not cover them.
    """

    iteration: int
    promoted_per_class: dict[str, int]
    training_size: int
    weighted_f1: float | None = None
    dropped_features: int = 0

    @property
    def promoted_count(self) -> int:
        return sum(self.promoted_per_class.values())


@dataclass(frozen=True)
class EvalReport:
    """Per-class and support-weighted metrics plus the growth history."""

    classes: tuple[str, ...]
    per_class: dict[str, PRF]
    weighted: PRF
    support: dict[str, int]
    iterations: tuple[IterationRecord, ...] = ()


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Square count matrix; rows are true classes, columns predicted."""

    class_set: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_set", tuple(self.class_set))
        counts = np.array(self.counts, dtype=np.int64)
        c = len(self.class_set)
        if counts.shape != (c, c):
            raise ValueError(f"counts shape {counts.shape} does not match {c} classes")
        if counts.size and counts.min() < 0:
            raise ValueError("confusion counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.class_set == other.class_set and np.array_equal(self.counts, other.counts)


def confusion(true_labels: Sequence[str], predicted_labels: Sequence[str]) -> ConfusionMatrix:
    """Tally a confusion matrix over the union of observed labels.

    The class set is the sorted union of true and predicted labels, so
    the matrix is always square and every sample is counted exactly once.
    """
    if len(true_labels) != len(predicted_labels):
        raise LengthMismatch(
            f"{len(true_labels)} true labels vs {len(predicted_labels)} predictions"
        )
    class_set = tuple(sorted(set(true_labels) | set(predicted_labels)))
    index = {c: i for i, c in enumerate(class_set)}
    counts = np.zeros((len(class_set), len(class_set)), dtype=np.int64)
    for t, p in zip(true_labels, predicted_labels):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(class_set, counts)


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def evaluate(cm: ConfusionMatrix) -> EvalReport:
    """Per-class and support-weighted precision/recall/F1 for a tally."""
    total = cm.total
    if total == 0:
        raise EmptyMatrix("confusion matrix tallies no samples")
    tp = np.diag(cm.counts).astype(np.float64)
    true_totals = cm.counts.sum(axis=1).astype(np.float64)
    pred_totals = cm.counts.sum(axis=0).astype(np.float64)

    per_class: dict[str, PRF] = {}
    support: dict[str, int] = {}
    for i, label in enumerate(cm.class_set):
        p = float(tp[i] / pred_totals[i]) if pred_totals[i] else 0.0
        r = float(tp[i] / true_totals[i]) if true_totals[i] else 0.0
        per_class[label] = PRF(p, r, f1_score(p, r))
        support[label] = int(true_totals[i])

    weights = true_totals / total
    weighted = PRF(
        float(sum(w * per_class[c].precision for w, c in zip(weights, cm.class_set))),
        float(sum(w * per_class[c].recall for w, c in zip(weights, cm.class_set))),
        float(sum(w * per_class[c].f1 for w, c in zip(weights, cm.class_set))),
    )
    return EvalReport(cm.class_set, per_class, weighted, support)


def weighted_f1(true_labels: Sequence[str], predicted_labels: Sequence[str]) -> float:
    """Support-weighted F1 of a prediction run; convenience wrapper."""
    return evaluate(confusion(true_labels, predicted_labels)).weighted.f1
