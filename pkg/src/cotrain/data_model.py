"""Core containers for expression data plus dataset algebra.

An :class:`ExpressionMatrix` is a dense features-by-samples block; one
column is one sample's expression vector. Labeled and unlabeled datasets
wrap a matrix, and the module-level operations (alignment, overlap,
column append) are the pure building blocks the training loops compose.
All containers are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateFeature,
    DuplicateSample,
    EmptyIntersection,
    FeatureMismatch,
    LengthMismatch,
    ViewMismatch,
)


class ViewKind(Enum):
    """Which feature space a matrix lives in."""

    MIRNA = "mirna"
    GENE = "gene"


def _check_unique(ids: Sequence[str], what: str, exc: type) -> None:
    seen = set()
    for i in ids:
        if i in seen:
            raise exc(f"duplicate {what} id: {i!r}")
        seen.add(i)


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """Finite float64 matrix with string ids on both axes.

    Shape is ``(len(feature_ids), len(sample_ids))``; ids on each axis
    are unique. The value array is copied in and frozen, so instances
    never alias caller-owned memory.
    """

    feature_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray
    view_kind: ViewKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "feature_ids", tuple(self.feature_ids))
        object.__setattr__(self, "sample_ids", tuple(self.sample_ids))
        _check_unique(self.feature_ids, "feature", DuplicateFeature)
        _check_unique(self.sample_ids, "sample", DuplicateSample)
        values = np.array(self.values, dtype=np.float64, order="C")
        if values.ndim != 2 or values.shape != (len(self.feature_ids), len(self.sample_ids)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(self.feature_ids)} features x {len(self.sample_ids)} samples"
            )
        if values.size and not np.isfinite(values).all():
            raise ValueError("expression values must be finite (no NaN/Inf)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_features(self) -> int:
        return len(self.feature_ids)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    @cached_property
    def feature_index(self) -> dict[str, int]:
        return {fid: i for i, fid in enumerate(self.feature_ids)}

    @cached_property
    def sample_index(self) -> dict[str, int]:
        return {sid: i for i, sid in enumerate(self.sample_ids)}

    def select_features(self, ids: Iterable[str]) -> "ExpressionMatrix":
        """Rows restricted and reordered to `ids` (all must be present)."""
        ids = list(ids)
        try:
            rows = [self.feature_index[fid] for fid in ids]
        except KeyError as exc:
            raise FeatureMismatch(f"feature id not in matrix: {exc.args[0]!r}") from None
        return ExpressionMatrix(tuple(ids), self.sample_ids, self.values[rows, :], self.view_kind)

    def select_samples(self, ids: Iterable[str]) -> "ExpressionMatrix":
        """Columns restricted and reordered to `ids` (all must be present)."""
        ids = list(ids)
        cols = [self.sample_index[sid] for sid in ids]
        return ExpressionMatrix(self.feature_ids, tuple(ids), self.values[:, cols], self.view_kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpressionMatrix):
            return NotImplemented
        return (
            self.view_kind == other.view_kind
            and self.feature_ids == other.feature_ids
            and self.sample_ids == other.sample_ids
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Expression matrix with one class label per sample column."""

    matrix: ExpressionMatrix
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != self.matrix.n_samples:
            raise LengthMismatch(
                f"{len(self.labels)} labels for {self.matrix.n_samples} samples"
            )

    @property
    def n_samples(self) -> int:
        return self.matrix.n_samples

    @property
    def class_set(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.labels)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return self.labels == other.labels and self.matrix == other.matrix


@dataclass(frozen=True)
class UnlabeledDataset:
    """Expression matrix without labels; `name` tags promoted sample ids."""

    matrix: ExpressionMatrix
    name: str = ""


@dataclass(frozen=True)
class ConfidentPrediction:
    """One predicted label with the classifier's confidence in [0, 1]."""

    sample_id: str
    label: str
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


def align_features(
    a: ExpressionMatrix, b: ExpressionMatrix
) -> tuple[ExpressionMatrix, ExpressionMatrix]:
    """Restrict both matrices to their shared features, sorted by id.

    The canonical row order is lexicographic over feature ids, so
    aligning is idempotent and independent of input order. Sample
    columns are untouched.
    """
    if a.view_kind != b.view_kind:
        raise ViewMismatch(f"cannot align {a.view_kind.value} with {b.view_kind.value}")
    shared = sorted(set(a.feature_ids) & set(b.feature_ids))
    if not shared:
        raise EmptyIntersection("matrices share no feature ids")
    return a.select_features(shared), b.select_features(shared)


def feature_overlap(a: ExpressionMatrix, b: ExpressionMatrix) -> int:
    """Number of feature ids the two matrices share."""
    if a.view_kind != b.view_kind:
        raise ViewMismatch(f"cannot compare {a.view_kind.value} with {b.view_kind.value}")
    return len(set(a.feature_ids) & set(b.feature_ids))


def append_samples(base: LabeledDataset, extra: LabeledDataset) -> LabeledDataset:
    """Concatenate `extra`'s columns after `base`'s.

    Feature panels must already agree exactly (same ids, same order) and
    sample ids must be disjoint; a collision signals a pipeline bug, not
    a recoverable condition.
    """
    if base.matrix.view_kind != extra.matrix.view_kind:
        raise ViewMismatch("cannot append across views")
    if base.matrix.feature_ids != extra.matrix.feature_ids:
        raise FeatureMismatch("feature panels differ; align before appending")
    collisions = set(base.matrix.sample_ids) & set(extra.matrix.sample_ids)
    if collisions:
        raise DuplicateSample(f"sample ids already present: {sorted(collisions)[:5]}")
    matrix = ExpressionMatrix(
        base.matrix.feature_ids,
        base.matrix.sample_ids + extra.matrix.sample_ids,
        np.hstack([base.matrix.values, extra.matrix.values]),
        base.matrix.view_kind,
    )
    return LabeledDataset(matrix, base.labels + extra.labels)


def restrict_to_panel(m: ExpressionMatrix, panel: Sequence[str]) -> ExpressionMatrix:
    """Rows restricted/reordered to `panel`; every panel id must exist."""
    return m.select_features(panel)
