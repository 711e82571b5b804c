"""Confidence-emitting multiclass classifiers behind one contract.

Two kinds: a from-scratch random forest (confidence = winning vote
fraction) and a one-vs-rest linear margin classifier (confidence =
softmax over margins). Training is deterministic given (spec.seed,
data); models are immutable and prediction is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..data_model import ConfidentPrediction, ExpressionMatrix, LabeledDataset, ViewKind
from ..errors import ConfigError, DegenerateLabels, EmptyDataset, FeatureMismatch, ViewMismatch
from . import forest, kernels, linear


class ClassifierKind(Enum):
    RANDOM_FOREST = "rf"
    LINEAR_OVR = "linear"


@dataclass(frozen=True)
class ClassifierSpec:
    """Hyperparameters plus the master seed.

    `features_per_split` is an int or "sqrt" (floor of the square root
    of the feature count, the usual forest default; only the tree count
    is a tuned quantity here). Linear fields are ignored by the forest
    and vice versa.
    """

    kind: ClassifierKind = ClassifierKind.RANDOM_FOREST
    n_trees: int = 10
    max_depth: int | None = None
    features_per_split: Union[int, str] = "sqrt"
    seed: int = 0
    linear_epochs: int = 50
    linear_lr: float = 0.01
    linear_reg: float = 1e-3

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1 or None, got {self.max_depth}")
        if isinstance(self.features_per_split, str):
            if self.features_per_split != "sqrt":
                raise ConfigError(f"features_per_split: int or 'sqrt', got {self.features_per_split!r}")
        elif self.features_per_split < 1:
            raise ConfigError(f"features_per_split must be >= 1, got {self.features_per_split}")
        if self.linear_epochs < 1 or self.linear_lr <= 0 or self.linear_reg < 0:
            raise ConfigError("linear_epochs >= 1, linear_lr > 0 and linear_reg >= 0 required")


@dataclass(frozen=True)
class TrainedModel:
    spec: ClassifierSpec
    class_set: tuple[str, ...]
    feature_ids: tuple[str, ...]
    view_kind: ViewKind
    state: object  # tuple[forest.Tree, ...] or linear.LinearState


def _resolve_k(features_per_split: Union[int, str], n_features: int) -> int:
    if features_per_split == "sqrt":
        return max(1, int(math.isqrt(n_features)))
    k = int(features_per_split)
    if k > n_features:
        raise ConfigError(f"features_per_split {k} exceeds feature count {n_features}")
    return k


def train(spec: ClassifierSpec, data: LabeledDataset) -> TrainedModel:
    """Fit a model on a labeled dataset.

    Requires at least two distinct labels and a nonempty matrix. Given
    equal (spec, data) the result is identical run to run, regardless of
    sample column order for the forest (bootstrap draws are keyed by
    sample id).
    """
    m = data.matrix
    if m.n_samples == 0 or m.n_features == 0:
        raise EmptyDataset(f"training data is {m.n_features} features x {m.n_samples} samples")
    class_set = data.class_set
    if len(class_set) < 2:
        raise DegenerateLabels(f"training data has {len(class_set)} class(es); need >= 2")
    class_index = {c: i for i, c in enumerate(class_set)}
    y = np.array([class_index[label] for label in data.labels], dtype=np.int64)
    x = np.ascontiguousarray(m.values.T)

    if spec.kind is ClassifierKind.RANDOM_FOREST:
        k = _resolve_k(spec.features_per_split, m.n_features)
        sorted_positions = np.array(
            sorted(range(m.n_samples), key=m.sample_ids.__getitem__), dtype=np.int64
        )
        state: object = forest.fit_forest(
            x, y, len(class_set), sorted_positions, spec.n_trees, spec.max_depth, k, spec.seed
        )
    else:
        state = linear.fit_linear(
            x, y, len(class_set), spec.linear_epochs, spec.linear_lr, spec.linear_reg, spec.seed
        )
    return TrainedModel(spec, class_set, m.feature_ids, m.view_kind, state)


def _vote_predictions(
    votes: np.ndarray, n_trees: int, sample_ids: tuple[str, ...], class_set: tuple[str, ...]
) -> list[ConfidentPrediction]:
    out = []
    for i, sid in enumerate(sample_ids):
        win = int(np.argmax(votes[i]))  # ties: first class in class_set order
        out.append(ConfidentPrediction(sid, class_set[win], int(votes[i, win]) / n_trees))
    return out


def predict_with_confidence(
    model: TrainedModel, m: ExpressionMatrix
) -> list[ConfidentPrediction]:
    """One prediction per sample column of `m`.

    The probe's feature panel must equal the training panel as a set;
    rows are reordered to the training order before prediction.
    """
    if m.view_kind != model.view_kind:
        raise ViewMismatch(
            f"model was trained on the {model.view_kind.value} view, probe is {m.view_kind.value}"
        )
    if set(m.feature_ids) != set(model.feature_ids):
        missing = sorted(set(model.feature_ids) - set(m.feature_ids))[:5]
        extra = sorted(set(m.feature_ids) - set(model.feature_ids))[:5]
        raise FeatureMismatch(f"feature panel differs (missing {missing}, extra {extra})")
    probe = m if m.feature_ids == model.feature_ids else m.select_features(model.feature_ids)
    x = np.ascontiguousarray(probe.values.T)

    if model.spec.kind is ClassifierKind.RANDOM_FOREST:
        votes = forest.forest_votes(model.state, x, len(model.class_set))
        return _vote_predictions(votes, model.spec.n_trees, probe.sample_ids, model.class_set)
    probs = linear.probabilities(model.state, x)
    out = []
    for i, sid in enumerate(probe.sample_ids):
        win = int(np.argmax(probs[i]))
        out.append(ConfidentPrediction(sid, model.class_set[win], float(probs[i, win])))
    return out


__all__ = [
    "ClassifierKind",
    "ClassifierSpec",
    "TrainedModel",
    "train",
    "predict_with_confidence",
    "kernels",
]
