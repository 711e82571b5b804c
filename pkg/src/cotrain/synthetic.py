"""Deterministic generator of coupled two-view classification datasets.

Class-conditional Gaussian clouds (noise sigma fixed at 1) with class
means placed on a scaled one-hot simplex, so every pair of class means
sits `class_separation` apart. The gene view's means are derived from
the miRNA view's through the coupling table with the same mean
aggregation the pipeline uses, which makes cross-view promotion
distributionally faithful. Labeled, unlabeled and test splits use
disjoint sample ids; the unlabeled splits' true labels are returned
separately for auditing only.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data_model import ExpressionMatrix, LabeledDataset, UnlabeledDataset, ViewKind
from .errors import ConfigError
from .io_ingest import write_expression_csv, write_labels_tsv, write_target_pairs_tsv
from .view_mapping import TargetPairTable


@dataclass(frozen=True)
class SyntheticSpec:
    n_classes: int = 2
    features_per_view: int = 20
    n_labeled: int = 10
    n_unlabeled: int = 200
    n_test: int = 200
    class_separation: float = 3.0
    coupling: str = "bijective"  # "bijective" | "random"
    coupling_density: float = 0.15
    label_noise: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_classes < 2:
            raise ConfigError(f"n_classes must be >= 2, got {self.n_classes}")
        if self.features_per_view < self.n_classes:
            raise ConfigError("features_per_view must be >= n_classes (simplex means)")
        if min(self.n_labeled, self.n_unlabeled, self.n_test) < 1:
            raise ConfigError("all splits need at least one sample")
        if self.n_labeled < self.n_classes:
            raise ConfigError("n_labeled must cover every class at least once")
        if self.class_separation < 0:
            raise ConfigError("class_separation must be >= 0")
        if self.coupling not in ("bijective", "random"):
            raise ConfigError(f"coupling must be 'bijective' or 'random', got {self.coupling!r}")
        if not 0.0 < self.coupling_density <= 1.0:
            raise ConfigError("coupling_density must be in (0, 1]")
        if not 0.0 <= self.label_noise < 0.5:
            raise ConfigError("label_noise must be in [0, 0.5)")


@dataclass(frozen=True)
class SyntheticData:
    l_mirna: LabeledDataset
    u_mirna: UnlabeledDataset
    l_gene: LabeledDataset
    u_gene: UnlabeledDataset
    test_mirna: LabeledDataset
    test_gene: LabeledDataset
    table: TargetPairTable
    unlabeled_truth: dict[str, str]


def _class_labels(n: int, n_classes: int, rng: np.random.Generator) -> np.ndarray:
    # Round-robin then shuffle: every class present whenever n >= n_classes.
    base = np.arange(n) % n_classes
    return base[rng.permutation(n)]


def _coupling_matrix(spec: SyntheticSpec, rng: np.random.Generator) -> np.ndarray:
    f = spec.features_per_view
    if spec.coupling == "bijective":
        return np.eye(f, dtype=bool)
    adj = rng.random((f, f)) < spec.coupling_density
    for j in range(f):
        if not adj[j].any():
            adj[j, j] = True
        if not adj[:, j].any():
            adj[j, j] = True
    return adj


def generate(spec: SyntheticSpec) -> SyntheticData:
    """Build both views' splits, the coupling table, and withheld truth."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    f = spec.features_per_view
    classes = [f"c{i}" for i in range(spec.n_classes)]
    mirna_ids = tuple(f"mir{j:04d}" for j in range(f))
    gene_ids = tuple(f"gene{j:04d}" for j in range(f))

    scale = spec.class_separation / np.sqrt(2.0)
    mirna_means = np.zeros((spec.n_classes, f))
    for c in range(spec.n_classes):
        mirna_means[c, c] = scale

    adj = _coupling_matrix(spec, rng)
    pairs = [(mirna_ids[i], gene_ids[j]) for i, j in zip(*np.nonzero(adj))]
    table = TargetPairTable.from_pairs(pairs)
    # Gene-view means follow the coupling with the pipeline's own mean
    # aggregation, so mapped samples land in the right class cloud.
    gene_means = np.zeros((spec.n_classes, f))
    for j in range(f):
        sources = np.nonzero(adj[:, j])[0]
        gene_means[:, j] = mirna_means[:, sources].mean(axis=1)

    def make_split(view: ViewKind, prefix: str, n: int, means: np.ndarray, feature_ids):
        y = _class_labels(n, spec.n_classes, rng)
        values = means[y].T + rng.standard_normal((f, n))
        sample_ids = tuple(f"{prefix}{i:04d}" for i in range(n))
        matrix = ExpressionMatrix(feature_ids, sample_ids, values, view)
        return matrix, y

    def noisy(y: np.ndarray) -> np.ndarray:
        if spec.label_noise == 0.0:
            return y
        flip = rng.random(y.size) < spec.label_noise
        shift = 1 + rng.integers(0, spec.n_classes - 1, size=y.size)
        return np.where(flip, (y + shift) % spec.n_classes, y)

    lm_x, lm_y = make_split(ViewKind.MIRNA, "mirna-l-", spec.n_labeled, mirna_means, mirna_ids)
    um_x, um_y = make_split(ViewKind.MIRNA, "mirna-u-", spec.n_unlabeled, mirna_means, mirna_ids)
    tm_x, tm_y = make_split(ViewKind.MIRNA, "mirna-t-", spec.n_test, mirna_means, mirna_ids)
    lg_x, lg_y = make_split(ViewKind.GENE, "gene-l-", spec.n_labeled, gene_means, gene_ids)
    ug_x, ug_y = make_split(ViewKind.GENE, "gene-u-", spec.n_unlabeled, gene_means, gene_ids)
    tg_x, tg_y = make_split(ViewKind.GENE, "gene-t-", spec.n_test, gene_means, gene_ids)

    lm_y, lg_y = noisy(lm_y), noisy(lg_y)
    truth = {sid: classes[c] for sid, c in zip(um_x.sample_ids, um_y)}
    truth.update({sid: classes[c] for sid, c in zip(ug_x.sample_ids, ug_y)})

    def labels_of(y: np.ndarray) -> tuple[str, ...]:
        return tuple(classes[c] for c in y)

    return SyntheticData(
        l_mirna=LabeledDataset(lm_x, labels_of(lm_y)),
        u_mirna=UnlabeledDataset(um_x, "mirna-pool"),
        l_gene=LabeledDataset(lg_x, labels_of(lg_y)),
        u_gene=UnlabeledDataset(ug_x, "gene-pool"),
        test_mirna=LabeledDataset(tm_x, labels_of(tm_y)),
        test_gene=LabeledDataset(tg_x, labels_of(tg_y)),
        table=table,
        unlabeled_truth=truth,
    )


def write_dataset(data: SyntheticData, out_dir: str | Path) -> dict[str, Path]:
    """Write all splits in the pipeline's standard formats.

    `labels.tsv` covers the labeled and test splits of both views.
    `unlabeled_truth.tsv` holds the pools' withheld labels and exists
    for auditing promotion accuracy only; the training harness never
    reads it.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "mirna_labeled": out / "mirna_labeled.csv",
        "mirna_unlabeled": out / "mirna_unlabeled.csv",
        "mirna_test": out / "mirna_test.csv",
        "gene_labeled": out / "gene_labeled.csv",
        "gene_unlabeled": out / "gene_unlabeled.csv",
        "gene_test": out / "gene_test.csv",
        "labels": out / "labels.tsv",
        "targets": out / "targets.tsv",
        "unlabeled_truth": out / "unlabeled_truth.tsv",
    }
    write_expression_csv(data.l_mirna.matrix, paths["mirna_labeled"])
    write_expression_csv(data.u_mirna.matrix, paths["mirna_unlabeled"])
    write_expression_csv(data.test_mirna.matrix, paths["mirna_test"])
    write_expression_csv(data.l_gene.matrix, paths["gene_labeled"])
    write_expression_csv(data.u_gene.matrix, paths["gene_unlabeled"])
    write_expression_csv(data.test_gene.matrix, paths["gene_test"])

    labels: dict[str, str] = {}
    for ds in (data.l_mirna, data.l_gene, data.test_mirna, data.test_gene):
        labels.update(zip(ds.matrix.sample_ids, ds.labels))
    write_labels_tsv(labels, paths["labels"])
    write_target_pairs_tsv(data.table, paths["targets"])
    write_labels_tsv(data.unlabeled_truth, paths["unlabeled_truth"])
    return paths
