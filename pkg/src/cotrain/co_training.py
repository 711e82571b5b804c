"""Dual-view co-training: two classifiers exchange confident predictions.

Per iteration, in order: train the miRNA-view classifier, train the
gene-view classifier, classify each view's unlabeled pools, keep
predictions strictly above the confidence threshold, then cross-promote:
confident gene-view samples are mapped into the miRNA view and appended
to the miRNA training set, and vice versa. Retraining happens at the
top of the next iteration, so appends take effect one iteration later.
The loop ends at the iteration cap, when both views promote nothing, or
when no supplied evaluation set improves.

Promotion is strictly cross-view: a sample confidently labeled by the
miRNA classifier only ever lands in the gene training set, and the other
way around.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .classifiers import ClassifierSpec, TrainedModel, predict_with_confidence, train
from .data_model import (
    ConfidentPrediction,
    ExpressionMatrix,
    LabeledDataset,
    UnlabeledDataset,
    ViewKind,
    append_samples,
    restrict_to_panel,
)
from .errors import ClassSetMismatch, ConfigError, EmptyTable, NoCoverage
from .metrics import IterationRecord
from .self_training import TrainingHistory, _drop_samples, _eval_f1, align_pools, choose_most_confident
from .view_mapping import TargetPairTable, convert_to_gene, convert_to_mirna


@dataclass(frozen=True)
class CoTrainConfig:
    """Loop parameters for both views.

    `seed_with_opposite_labeled` additionally maps each view's labeled
    set (with its true labels) into the other view before the first
    iteration. Off by default so that empty pools leave both classifiers
    exactly equal to their supervised baselines.
    """

    mirna_classifier: ClassifierSpec
    gene_classifier: ClassifierSpec
    alpha: float = 0.9
    max_iterations: int = 2
    remove_promoted: bool = True
    seed_with_opposite_labeled: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass
class CoTrainOutput:
    c_mirna: TrainedModel
    c_gene: TrainedModel
    history_mirna: TrainingHistory
    history_gene: TrainingHistory

    def __post_init__(self) -> None:
        if self.c_mirna.class_set != self.c_gene.class_set:
            raise ClassSetMismatch(
                f"output class sets diverged: {self.c_mirna.class_set} vs {self.c_gene.class_set}"
            )


class _View:
    """Mutable per-view state while the loop runs."""

    def __init__(
        self,
        kind: ViewKind,
        labeled: LabeledDataset,
        pools: Sequence[UnlabeledDataset],
        eval_set: LabeledDataset | None,
    ) -> None:
        self.kind = kind
        self.dropped_pools: tuple[str, ...] = ()
        if pools:
            labeled, pool_work, panel, dropped = align_pools(labeled, pools)
            self.pools = pool_work
            self.dropped_pools = dropped
        else:
            self.pools = []
        self.labeled = labeled
        self.eval_set = (
            LabeledDataset(restrict_to_panel(eval_set.matrix, labeled.matrix.feature_ids), eval_set.labels)
            if eval_set is not None
            else None
        )
        self.already_promoted: set[str] = set()
        self.dropped_features = 0  # receiving-panel features lost to mapping coverage

    @property
    def panel(self) -> tuple[str, ...]:
        return self.labeled.matrix.feature_ids

    def shrink_panel(self, kept: Sequence[str]) -> None:
        """Restrict everything this view trains or predicts on to `kept`."""
        self.dropped_features += len(self.panel) - len(kept)
        self.labeled = LabeledDataset(restrict_to_panel(self.labeled.matrix, kept), self.labeled.labels)
        self.pools = [
            UnlabeledDataset(restrict_to_panel(p.matrix, kept), p.name) for p in self.pools
        ]
        if self.eval_set is not None:
            self.eval_set = LabeledDataset(
                restrict_to_panel(self.eval_set.matrix, kept), self.eval_set.labels
            )


def _convert(matrix: ExpressionMatrix, table: TargetPairTable, panel, to_view: ViewKind):
    if to_view is ViewKind.MIRNA:
        return convert_to_mirna(matrix, table, panel)
    return convert_to_gene(matrix, table, panel)


def _append_mapped(
    receiver: _View,
    source_matrix: ExpressionMatrix,
    ids: Sequence[str],
    labels: Sequence[str],
    table: TargetPairTable,
    prefix: str,
) -> list[tuple[str, str]]:
    """Map the named source columns into the receiver's view and append.

    When the table cannot cover part of the receiving panel, the
    receiver's panel shrinks to the covered subset (a zero fill would
    fabricate expression values) and the loss is tallied.
    """
    sub = source_matrix.select_samples(ids)
    try:
        mapped = _convert(sub, table, receiver.panel, receiver.kind)
    except NoCoverage as exc:
        raise NoCoverage(
            f"mapping into the {receiver.kind.value} view covers nothing: {exc}"
        ) from exc
    if mapped.feature_ids != receiver.panel:
        receiver.shrink_panel(mapped.feature_ids)
    renamed = ExpressionMatrix(
        mapped.feature_ids,
        tuple(f"{prefix}:{sid}" for sid in mapped.sample_ids),
        mapped.values,
        mapped.view_kind,
    )
    batch = LabeledDataset(renamed, tuple(labels))
    receiver.labeled = append_samples(receiver.labeled, batch)
    return list(zip(renamed.sample_ids, batch.labels))


def _classify_pools(
    view: _View, model: TrainedModel, alpha: float, remove: bool
) -> list[tuple[UnlabeledDataset, list[ConfidentPrediction]]]:
    """Confident predictions per pool; optionally consume the samples."""
    out = []
    next_pools = []
    for pool in view.pools:
        if pool.matrix.n_samples == 0:
            next_pools.append(pool)
            continue
        preds = predict_with_confidence(model, pool.matrix)
        chosen = choose_most_confident(preds, alpha)
        chosen = [
            p for p in chosen if f"mapped:{view.kind.value}:{pool.name}:{p.sample_id}" not in view.already_promoted
        ]
        if chosen:
            out.append((pool, chosen))
        if remove and chosen:
            pool = UnlabeledDataset(
                _drop_samples(pool.matrix, {p.sample_id for p in chosen}), pool.name
            )
        next_pools.append(pool)
    view.pools = next_pools
    return out


def co_train(
    l_mirna: LabeledDataset,
    u_mirna: Sequence[UnlabeledDataset],
    l_gene: LabeledDataset,
    u_gene: Sequence[UnlabeledDataset],
    table: TargetPairTable,
    cfg: CoTrainConfig,
    eval_mirna: LabeledDataset | None = None,
    eval_gene: LabeledDataset | None = None,
) -> CoTrainOutput:
    """Run the co-training loop; returns both models and both histories."""
    if l_mirna.class_set != l_gene.class_set:
        raise ClassSetMismatch(
            f"miRNA classes {l_mirna.class_set} != gene classes {l_gene.class_set}"
        )
    if not len(table):
        raise EmptyTable("co-training needs a nonempty target-pair table")

    mirna = _View(ViewKind.MIRNA, l_mirna, u_mirna, eval_mirna)
    gene = _View(ViewKind.GENE, l_gene, u_gene, eval_gene)

    if cfg.seed_with_opposite_labeled:
        gene_l, mirna_l = gene.labeled, mirna.labeled
        _append_mapped(
            mirna, gene_l.matrix, gene_l.matrix.sample_ids, gene_l.labels, table, "mapped:gene:labeled"
        )
        _append_mapped(
            gene, mirna_l.matrix, mirna_l.matrix.sample_ids, mirna_l.labels, table, "mapped:mirna:labeled"
        )

    history_m = TrainingHistory(initial_size=mirna.labeled.n_samples, dropped_pools=mirna.dropped_pools)
    history_g = TrainingHistory(initial_size=gene.labeled.n_samples, dropped_pools=gene.dropped_pools)
    prev_f1_m: float | None = None
    prev_f1_g: float | None = None
    c_m = c_g = None

    for iteration in range(1, cfg.max_iterations + 1):
        c_m = train(cfg.mirna_classifier, mirna.labeled)
        c_g = train(cfg.gene_classifier, gene.labeled)
        f1_m = _eval_f1(c_m, mirna.eval_set) if mirna.eval_set is not None else None
        f1_g = _eval_f1(c_g, gene.eval_set) if gene.eval_set is not None else None

        confident_m = _classify_pools(mirna, c_m, cfg.alpha, cfg.remove_promoted)
        confident_g = _classify_pools(gene, c_g, cfg.alpha, cfg.remove_promoted)

        # Cross-promotion only: gene-view confidence feeds the miRNA
        # training set (and vice versa), never its own view.
        promoted_to_m: list[tuple[str, str]] = []
        for pool, chosen in confident_g:
            pairs = _append_mapped(
                mirna,
                pool.matrix,
                [p.sample_id for p in chosen],
                [p.label for p in chosen],
                table,
                f"mapped:gene:{pool.name}",
            )
            promoted_to_m.extend(pairs)
            mirna.already_promoted.update(pid for pid, _ in pairs)
        promoted_to_g: list[tuple[str, str]] = []
        for pool, chosen in confident_m:
            pairs = _append_mapped(
                gene,
                pool.matrix,
                [p.sample_id for p in chosen],
                [p.label for p in chosen],
                table,
                f"mapped:mirna:{pool.name}",
            )
            promoted_to_g.extend(pairs)
            gene.already_promoted.update(pid for pid, _ in pairs)

        def _per_class(pairs: list[tuple[str, str]]) -> dict[str, int]:
            out: dict[str, int] = {}
            for _, label in pairs:
                out[label] = out.get(label, 0) + 1
            return out

        history_m.records.append(
            IterationRecord(
                iteration,
                _per_class(promoted_to_m),
                mirna.labeled.n_samples,
                weighted_f1=f1_m,
                dropped_features=mirna.dropped_features,
            )
        )
        history_m.promotions.append(promoted_to_m)
        history_g.records.append(
            IterationRecord(
                iteration,
                _per_class(promoted_to_g),
                gene.labeled.n_samples,
                weighted_f1=f1_g,
                dropped_features=gene.dropped_features,
            )
        )
        history_g.promotions.append(promoted_to_g)

        if not promoted_to_m and not promoted_to_g:
            break
        improvements = []
        if f1_m is not None and prev_f1_m is not None:
            improvements.append(f1_m > prev_f1_m)
        if f1_g is not None and prev_f1_g is not None:
            improvements.append(f1_g > prev_f1_g)
        if improvements and not any(improvements):
            break
        prev_f1_m, prev_f1_g = f1_m, f1_g

    assert c_m is not None and c_g is not None
    return CoTrainOutput(c_m, c_g, history_m, history_g)
