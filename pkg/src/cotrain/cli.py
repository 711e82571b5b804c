"""Command-line harness for reproducible experiments.

Subcommands:

* ``run``     — one experiment (baseline, self-train, or co-train),
  evaluated on a test set and written as a report JSON;
* ``compare`` — several experiment config files sharing one test set,
  rendered as a text table and a CSV;
* ``synth``   — write a synthetic coupled two-view dataset.

Reports carry no timestamps, so rerunning an experiment with the same
inputs and seed reproduces the report byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .classifiers import ClassifierKind, ClassifierSpec, predict_with_confidence
from .co_training import CoTrainConfig, co_train
from .data_model import ExpressionMatrix, LabeledDataset, UnlabeledDataset, ViewKind
from .errors import ConfigError, CotrainError, TestSetMismatch
from .io_ingest import (
    DatasetManifest,
    DatasetRole,
    Normalize,
    read_expression_csv,
    read_labels_tsv,
    read_target_pairs_tsv,
    write_report_json,
    zscore_per_feature,
)
from .metrics import EvalReport, confusion, evaluate
from .self_training import SelfTrainConfig, TrainingHistory, self_train
from .synthetic import SyntheticSpec, generate, write_dataset

MODES = ("baseline", "self-train", "co-train")
VIEWS = {"mirna": ViewKind.MIRNA, "gene": ViewKind.GENE}


@dataclass
class ExperimentConfig:
    """Everything one experiment needs, file paths included."""

    name: str = "experiment"
    mode: str = "baseline"
    labeled_mirna: str | None = None
    unlabeled_mirna: list[str] = field(default_factory=list)
    labeled_gene: str | None = None
    unlabeled_gene: list[str] = field(default_factory=list)
    targets: str | None = None
    labels: str | None = None
    test: str | None = None
    test_view: str | None = None
    eval_set: str | None = None
    alpha: float = 0.9
    max_iterations: int = 2
    classifier: str = "rf"
    trees: int = 10
    seed: int = 0
    normalize: str = "none"
    remove_promoted: bool = True
    seed_opposite_labeled: bool = False
    out: str | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.classifier not in ("rf", "linear"):
            raise ConfigError(f"classifier must be 'rf' or 'linear', got {self.classifier!r}")
        if self.normalize not in ("none", "zscore"):
            raise ConfigError(f"normalize must be 'none' or 'zscore', got {self.normalize!r}")
        if not self.labels:
            raise ConfigError("a labels file is required")
        if not self.test:
            raise ConfigError("a test expression file is required")
        if self.mode == "co-train":
            if not (self.labeled_mirna and self.labeled_gene):
                raise ConfigError("co-train mode needs --labeled-mirna and --labeled-gene")
            if not self.targets:
                raise ConfigError("co-train mode needs --targets")
        else:
            have = [v for v in (self.labeled_mirna, self.labeled_gene) if v]
            if len(have) != 1:
                raise ConfigError(f"{self.mode} mode needs exactly one labeled view")
        if self.test_view is not None and self.test_view not in VIEWS:
            raise ConfigError(f"test_view must be 'mirna' or 'gene', got {self.test_view!r}")

    @property
    def resolved_test_view(self) -> str:
        if self.test_view:
            return self.test_view
        if self.mode == "co-train":
            return "mirna"
        return "mirna" if self.labeled_mirna else "gene"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ExperimentConfig":
        with Path(path).open("r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        cfg = cls.from_dict(data)
        if cfg.name == "experiment":
            cfg.name = Path(path).stem
        return cfg


_ROLE_FOR_VIEW = {
    (ViewKind.MIRNA, True): DatasetRole.LABELED_MIRNA,
    (ViewKind.MIRNA, False): DatasetRole.UNLABELED_MIRNA,
    (ViewKind.GENE, True): DatasetRole.LABELED_GENE,
    (ViewKind.GENE, False): DatasetRole.UNLABELED_GENE,
}


def _ingest(manifest: DatasetManifest) -> ExpressionMatrix:
    m = read_expression_csv(manifest.path, manifest.view_kind)
    return zscore_per_feature(m) if manifest.normalize is Normalize.ZSCORE else m


def _load_matrix(path: str, view: ViewKind, normalize: str, labeled: bool = True) -> ExpressionMatrix:
    manifest = DatasetManifest(
        Path(path), _ROLE_FOR_VIEW[(view, labeled)],
        Normalize.ZSCORE if normalize == "zscore" else Normalize.NONE,
    )
    return _ingest(manifest)


def _attach_labels(m: ExpressionMatrix, label_map: dict[str, str], path: str) -> LabeledDataset:
    missing = [sid for sid in m.sample_ids if sid not in label_map]
    if missing:
        raise ConfigError(f"{path}: no label for sample(s) {missing[:5]}")
    return LabeledDataset(m, tuple(label_map[sid] for sid in m.sample_ids))


def _classifier_spec(cfg: ExperimentConfig) -> ClassifierSpec:
    kind = ClassifierKind.RANDOM_FOREST if cfg.classifier == "rf" else ClassifierKind.LINEAR_OVR
    return ClassifierSpec(kind=kind, n_trees=cfg.trees, seed=cfg.seed)


def run_experiment(cfg: ExperimentConfig) -> EvalReport:
    """Train per `cfg.mode`, evaluate on the test set, return the report."""
    cfg.validate()
    label_map = read_labels_tsv(cfg.labels)
    spec = _classifier_spec(cfg)
    test_view = VIEWS[cfg.resolved_test_view]
    test_matrix = _load_matrix(cfg.test, test_view, cfg.normalize)
    test_set = _attach_labels(test_matrix, label_map, cfg.test)

    def load_view(labeled_path: str, pool_paths: list[str], view: ViewKind):
        labeled = _attach_labels(
            _load_matrix(labeled_path, view, cfg.normalize), label_map, labeled_path
        )
        pools = [
            UnlabeledDataset(_load_matrix(p, view, cfg.normalize, labeled=False), Path(p).stem)
            for p in pool_paths
        ]
        return labeled, pools

    eval_set = None
    if cfg.eval_set:
        eval_set = _attach_labels(
            _load_matrix(cfg.eval_set, test_view, cfg.normalize), label_map, cfg.eval_set
        )

    history: TrainingHistory | None = None
    if cfg.mode == "co-train":
        l_mirna, u_mirna = load_view(cfg.labeled_mirna, cfg.unlabeled_mirna, ViewKind.MIRNA)
        l_gene, u_gene = load_view(cfg.labeled_gene, cfg.unlabeled_gene, ViewKind.GENE)
        table = read_target_pairs_tsv(cfg.targets)
        co_cfg = CoTrainConfig(
            mirna_classifier=spec,
            gene_classifier=spec,
            alpha=cfg.alpha,
            max_iterations=cfg.max_iterations,
            remove_promoted=cfg.remove_promoted,
            seed_with_opposite_labeled=cfg.seed_opposite_labeled,
        )
        out = co_train(
            l_mirna,
            u_mirna,
            l_gene,
            u_gene,
            table,
            co_cfg,
            eval_mirna=eval_set if test_view is ViewKind.MIRNA else None,
            eval_gene=eval_set if test_view is ViewKind.GENE else None,
        )
        model = out.c_mirna if test_view is ViewKind.MIRNA else out.c_gene
        history = out.history_mirna if test_view is ViewKind.MIRNA else out.history_gene
    else:
        if cfg.labeled_mirna:
            labeled, pools = load_view(cfg.labeled_mirna, cfg.unlabeled_mirna, ViewKind.MIRNA)
        else:
            labeled, pools = load_view(cfg.labeled_gene, cfg.unlabeled_gene, ViewKind.GENE)
        if cfg.mode == "baseline":
            pools = []
        st_cfg = SelfTrainConfig(
            classifier=spec,
            alpha=cfg.alpha,
            max_iterations=cfg.max_iterations,
            remove_promoted=cfg.remove_promoted,
        )
        model, history = self_train(labeled, pools, st_cfg, eval_set=eval_set)

    probe = test_set.matrix.select_features(model.feature_ids)
    preds = predict_with_confidence(model, probe)
    report = evaluate(confusion(list(test_set.labels), [p.label for p in preds]))
    return dataclasses.replace(report, iterations=tuple(history.records) if history else ())


def compare_experiments(cfgs: list[ExperimentConfig]) -> list[tuple[str, float, float, float]]:
    """Weighted P/R/F1 per config; all configs must share one test set."""
    if not cfgs:
        raise ConfigError("compare needs at least one experiment config")
    tests = {(c.test, c.resolved_test_view) for c in cfgs}
    if len(tests) > 1:
        raise TestSetMismatch(f"configs use different test sets: {sorted(tests)}")
    rows = []
    for cfg in cfgs:
        report = run_experiment(cfg)
        rows.append(
            (cfg.name, report.weighted.precision, report.weighted.recall, report.weighted.f1)
        )
    return rows


def _pct(v: float) -> str:
    return f"{100.0 * v:.1f}"


def _print_report(report: EvalReport) -> None:
    print(f"{'class':<16}{'P':>8}{'R':>8}{'F1':>8}{'support':>9}")
    for label in report.classes:
        prf = report.per_class[label]
        print(
            f"{label:<16}{_pct(prf.precision):>8}{_pct(prf.recall):>8}"
            f"{_pct(prf.f1):>8}{report.support[label]:>9}"
        )
    w = report.weighted
    print(f"{'weighted':<16}{_pct(w.precision):>8}{_pct(w.recall):>8}{_pct(w.f1):>8}")
    for rec in report.iterations:
        f1 = "-" if rec.weighted_f1 is None else _pct(rec.weighted_f1)
        print(
            f"iteration {rec.iteration}: promoted {rec.promoted_count}, "
            f"training size {rec.training_size}, eval F1 {f1}"
        )


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        name=args.name,
        mode=args.mode,
        labeled_mirna=args.labeled_mirna,
        unlabeled_mirna=args.unlabeled_mirna or [],
        labeled_gene=args.labeled_gene,
        unlabeled_gene=args.unlabeled_gene or [],
        targets=args.targets,
        labels=args.labels,
        test=args.test,
        test_view=args.test_view,
        eval_set=args.eval,
        alpha=args.alpha,
        max_iterations=args.max_iters,
        classifier=args.classifier,
        trees=args.trees,
        seed=args.seed,
        normalize=args.normalize,
        remove_promoted=not args.keep_promoted,
        seed_opposite_labeled=args.seed_opposite_labeled,
        out=args.out,
    )
    report = run_experiment(cfg)
    write_report_json(report, cfg.out)
    _print_report(report)
    print(f"report written to {cfg.out}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    cfgs = [ExperimentConfig.from_json_file(p) for p in args.configs]
    rows = compare_experiments(cfgs)
    width = max(len(name) for name, *_ in rows)
    print(f"{'name':<{width}}  {'P':>6} {'R':>6} {'F1':>6}")
    for name, p, r, f1 in rows:
        print(f"{name:<{width}}  {_pct(p):>6} {_pct(r):>6} {_pct(f1):>6}")
    if args.out:
        with Path(args.out).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["name", "precision", "recall", "f1"])
            for name, p, r, f1 in rows:
                writer.writerow([name, _pct(p), _pct(r), _pct(f1)])
        print(f"comparison written to {args.out}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        n_classes=args.classes,
        features_per_view=args.features,
        n_labeled=args.labeled,
        n_unlabeled=args.unlabeled,
        n_test=args.test,
        class_separation=args.separation,
        coupling=args.coupling,
        coupling_density=args.density,
        label_noise=args.label_noise,
        seed=args.seed,
    )
    paths = write_dataset(generate(spec), args.out_dir)
    for key, path in paths.items():
        print(f"{key}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotrain",
        description="Semi-supervised self-training and co-training over expression matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write a report JSON")
    run.add_argument("--name", default="experiment")
    run.add_argument("--mode", choices=MODES, required=True)
    run.add_argument("--labeled-mirna")
    run.add_argument("--unlabeled-mirna", action="append")
    run.add_argument("--labeled-gene")
    run.add_argument("--unlabeled-gene", action="append")
    run.add_argument("--targets", help="miRNA/gene target-pair TSV (co-train)")
    run.add_argument("--labels", required=True, help="sample_id<TAB>label TSV")
    run.add_argument("--test", required=True, help="test expression CSV")
    run.add_argument("--test-view", choices=sorted(VIEWS))
    run.add_argument("--eval", help="held-out expression CSV for early stopping")
    run.add_argument("--alpha", type=float, default=0.9)
    run.add_argument("--max-iters", type=int, default=2)
    run.add_argument("--classifier", choices=("rf", "linear"), default="rf")
    run.add_argument("--trees", type=int, default=10)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--normalize", choices=("none", "zscore"), default="none")
    run.add_argument("--keep-promoted", action="store_true",
                     help="leave promoted samples in the pool (they are re-scored, never re-added)")
    run.add_argument("--seed-opposite-labeled", action="store_true",
                     help="co-train: also map each view's labeled set into the other view up front")
    run.add_argument("--out", required=True, help="report JSON path")

    comp = sub.add_parser("compare", help="run several experiment configs against one test set")
    comp.add_argument("configs", nargs="+", help="experiment config JSON files")
    comp.add_argument("--out", help="comparison CSV path")

    synth = sub.add_parser("synth", help="write a synthetic coupled two-view dataset")
    synth.add_argument("--out-dir", required=True)
    synth.add_argument("--classes", type=int, default=2)
    synth.add_argument("--features", type=int, default=20)
    synth.add_argument("--labeled", type=int, default=10)
    synth.add_argument("--unlabeled", type=int, default=200)
    synth.add_argument("--test", type=int, default=200)
    synth.add_argument("--separation", type=float, default=3.0)
    synth.add_argument("--coupling", choices=("bijective", "random"), default="bijective")
    synth.add_argument("--density", type=float, default=0.15)
    synth.add_argument("--label-noise", type=float, default=0.0)
    synth.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "compare": _cmd_compare, "synth": _cmd_synth}
    try:
        return handlers[args.command](args)
    except CotrainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
