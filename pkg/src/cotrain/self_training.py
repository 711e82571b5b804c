"""Single-view self-training: train, pseudo-label a pool, promote, retrain.

Each iteration classifies the unlabeled pools with the current model,
keeps predictions whose confidence strictly exceeds the threshold,
appends them to the training set under their predicted labels, and
retrains. The loop stops at the iteration cap, on an iteration that
promotes nothing, or (when an evaluation set is supplied) when weighted
F1 stops improving. Promoted samples keep their pseudo-labels for good.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .classifiers import ClassifierSpec, TrainedModel, predict_with_confidence, train
from .data_model import (
    ConfidentPrediction,
    ExpressionMatrix,
    LabeledDataset,
    UnlabeledDataset,
    append_samples,
    feature_overlap,
    restrict_to_panel,
)
from .errors import ConfigError, NoOverlap
from .metrics import IterationRecord, weighted_f1


@dataclass(frozen=True)
class SelfTrainConfig:
    """Loop parameters; alpha is the strict promotion threshold."""

    classifier: ClassifierSpec
    alpha: float = 0.9
    max_iterations: int = 2
    remove_promoted: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass
class TrainingHistory:
    """Growth of the training set across iterations.

    `promotions[i]` holds the (prefixed sample id, pseudo-label) pairs
    appended at iteration i+1; reports serialize only the per-class
    counts in `records`.
    """

    initial_size: int
    records: list[IterationRecord] = field(default_factory=list)
    promotions: list[list[tuple[str, str]]] = field(default_factory=list)
    dropped_pools: tuple[str, ...] = ()

    @property
    def final_size(self) -> int:
        return self.records[-1].training_size if self.records else self.initial_size

    @property
    def total_promoted(self) -> int:
        return sum(rec.promoted_count for rec in self.records)


def choose_most_confident(
    preds: Sequence[ConfidentPrediction], alpha: float
) -> list[ConfidentPrediction]:
    """Predictions with confidence strictly greater than alpha, in order.

    The inequality is strict: confidence exactly equal to the threshold
    is never promoted, so alpha = 1.0 promotes nothing.
    """
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"alpha must be in (0, 1], got {alpha}")
    return [p for p in preds if p.confidence > alpha]


def _pool_name(pool: UnlabeledDataset, index: int) -> str:
    return pool.name or f"pool{index}"


def _promote(
    matrix: ExpressionMatrix, chosen: Sequence[ConfidentPrediction], prefix: str
) -> LabeledDataset:
    """Selected pool columns as a labeled dataset with prefixed ids."""
    ids = [p.sample_id for p in chosen]
    sub = matrix.select_samples(ids)
    renamed = ExpressionMatrix(
        sub.feature_ids,
        tuple(f"{prefix}:{sid}" for sid in sub.sample_ids),
        sub.values,
        sub.view_kind,
    )
    return LabeledDataset(renamed, tuple(p.label for p in chosen))


def _drop_samples(matrix: ExpressionMatrix, ids: set[str]) -> ExpressionMatrix:
    keep = [sid for sid in matrix.sample_ids if sid not in ids]
    return matrix.select_samples(keep)


def _eval_f1(model: TrainedModel, eval_set: LabeledDataset) -> float:
    preds = predict_with_confidence(model, eval_set.matrix)
    return weighted_f1(list(eval_set.labels), [p.label for p in preds])


def align_pools(
    labeled: LabeledDataset, pools: Sequence[UnlabeledDataset]
) -> tuple[LabeledDataset, list[UnlabeledDataset], tuple[str, ...], tuple[str, ...]]:
    """Restrict the labeled set and every usable pool to one shared panel.

    Pools sharing no feature with the labeled set are dropped (and
    reported); the working panel is the sorted intersection of the
    labeled panel with every remaining pool, fixed once up front so
    promoted columns always append cleanly.
    """
    kept: list[UnlabeledDataset] = []
    dropped: list[str] = []
    for i, pool in enumerate(pools):
        if feature_overlap(labeled.matrix, pool.matrix) == 0:
            dropped.append(_pool_name(pool, i))
        else:
            kept.append(pool)
    if not kept:
        raise NoOverlap("no unlabeled pool shares features with the labeled set")
    panel = set(labeled.matrix.feature_ids)
    for pool in kept:
        panel &= set(pool.matrix.feature_ids)
    if not panel:
        raise NoOverlap("the labeled set and the pools have no common feature panel")
    ordered = sorted(panel)
    labeled_work = LabeledDataset(restrict_to_panel(labeled.matrix, ordered), labeled.labels)
    pools_work = [
        UnlabeledDataset(restrict_to_panel(p.matrix, ordered), _pool_name(p, i))
        for i, p in enumerate(kept)
    ]
    return labeled_work, pools_work, tuple(ordered), tuple(dropped)


def self_train(
    labeled: LabeledDataset,
    pools: Sequence[UnlabeledDataset],
    cfg: SelfTrainConfig,
    eval_set: LabeledDataset | None = None,
) -> tuple[TrainedModel, TrainingHistory]:
    """Run the self-training loop; returns the final model and history.

    With an empty pool list this degenerates to a single supervised
    train: same model as ``train(cfg.classifier, labeled)`` and an empty
    iteration history.
    """
    if not pools:
        model = train(cfg.classifier, labeled)
        return model, TrainingHistory(initial_size=labeled.n_samples)

    work, pool_work, panel, dropped = align_pools(labeled, pools)
    eval_work = None
    if eval_set is not None:
        eval_work = LabeledDataset(restrict_to_panel(eval_set.matrix, panel), eval_set.labels)

    model = train(cfg.classifier, work)
    history = TrainingHistory(initial_size=work.n_samples, dropped_pools=dropped)
    prev_f1 = _eval_f1(model, eval_work) if eval_work is not None else None
    already_promoted: set[str] = set()

    for iteration in range(1, cfg.max_iterations + 1):
        batches: list[LabeledDataset] = []
        promoted_pairs: list[tuple[str, str]] = []
        next_pools: list[UnlabeledDataset] = []
        for pool in pool_work:
            if pool.matrix.n_samples == 0:
                next_pools.append(pool)
                continue
            preds = predict_with_confidence(model, pool.matrix)
            chosen = choose_most_confident(preds, cfg.alpha)
            # Re-scored pool samples must never be appended twice.
            chosen = [p for p in chosen if f"{pool.name}:{p.sample_id}" not in already_promoted]
            if chosen:
                batch = _promote(pool.matrix, chosen, pool.name)
                batches.append(batch)
                promoted_pairs.extend(zip(batch.matrix.sample_ids, batch.labels))
            if cfg.remove_promoted and chosen:
                pool = UnlabeledDataset(
                    _drop_samples(pool.matrix, {p.sample_id for p in chosen}), pool.name
                )
            next_pools.append(pool)
        pool_work = next_pools

        if not promoted_pairs:
            history.records.append(
                IterationRecord(iteration, {}, work.n_samples, weighted_f1=prev_f1)
            )
            history.promotions.append([])
            break

        already_promoted.update(pid for pid, _ in promoted_pairs)
        for batch in batches:
            work = append_samples(work, batch)
        model = train(cfg.classifier, work)

        per_class: dict[str, int] = {}
        for _, label in promoted_pairs:
            per_class[label] = per_class.get(label, 0) + 1
        new_f1 = _eval_f1(model, eval_work) if eval_work is not None else None
        history.records.append(
            IterationRecord(iteration, per_class, work.n_samples, weighted_f1=new_f1)
        )
        history.promotions.append(promoted_pairs)

        if eval_work is not None and new_f1 is not None and prev_f1 is not None:
            if new_f1 <= prev_f1:
                break
        prev_f1 = new_f1

    return model, history
