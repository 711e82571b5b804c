"""Readers and writers for every on-disk format the pipeline touches.

Formats:

* expression CSV — header ``feature_id,<sample1>,<sample2>,...``, one
  feature per row, 64-bit reals (scientific notation accepted);
* labels TSV — ``sample_id<TAB>label``, no header;
* target pairs TSV — ``miRNA_id<TAB>gene_id``, no header, duplicates
  collapse to one pair;
* report JSON — metrics plus iteration history, stable key order.

Readers accept LF and CRLF; writers emit LF. Values written by
:func:`write_expression_csv` use ``repr`` (shortest round-trip decimal),
so a write/read cycle reproduces every float bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np

from .data_model import ExpressionMatrix, ViewKind
from .errors import (
    ConfigError,
    DuplicateFeature,
    DuplicateSample,
    EmptyMatrix,
    FileError,
    ParseError,
    TooFewSamples,
)
from .metrics import EvalReport, IterationRecord, PRF
from .view_mapping import TargetPairTable

MISSING_TOKENS = ("", "NA", "null")


class DatasetRole(Enum):
    LABELED_MIRNA = "labeled-mirna"
    UNLABELED_MIRNA = "unlabeled-mirna"
    LABELED_GENE = "labeled-gene"
    UNLABELED_GENE = "unlabeled-gene"
    TARGET_PAIRS = "target-pairs"
    LABELS = "labels"


class Normalize(Enum):
    NONE = "none"
    ZSCORE = "zscore"


@dataclass(frozen=True)
class DatasetManifest:
    """One input file plus how to ingest it."""

    path: Path
    role: DatasetRole
    normalize: Normalize = Normalize.NONE

    def __post_init__(self) -> None:
        if not str(self.path):
            raise ConfigError("manifest path is empty")

    @property
    def view_kind(self) -> ViewKind:
        if self.role in (DatasetRole.LABELED_MIRNA, DatasetRole.UNLABELED_MIRNA):
            return ViewKind.MIRNA
        if self.role in (DatasetRole.LABELED_GENE, DatasetRole.UNLABELED_GENE):
            return ViewKind.GENE
        raise ConfigError(f"role {self.role.value} has no view")


def _parse_cell(cell: str, path, line: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(path, line, f"not a number: {cell!r}") from None
    if not math.isfinite(value):
        raise ParseError(path, line, f"non-finite value: {cell!r}")
    return value


def read_expression_csv(
    path: str | Path,
    view_kind: ViewKind = ViewKind.MIRNA,
    missing: str = "reject",
) -> ExpressionMatrix:
    """Parse an expression CSV into a matrix.

    `missing` selects the policy for empty/``NA``/``null`` cells:
    ``"reject"`` (default) raises, ``"row-mean"`` imputes the mean of the
    row's non-missing values. Silent imputation hides data problems, so
    it never happens without being asked for.
    """
    if missing not in ("reject", "row-mean"):
        raise ConfigError(f"unknown missing-cell policy: {missing!r}")
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = [(i, row) for i, row in enumerate(reader, start=1) if row]
    if not rows:
        raise EmptyMatrix(f"{path}: no header row")
    _, header = rows[0]
    if header[0] != "feature_id":
        raise ParseError(path, 1, f"header must start with 'feature_id', got {header[0]!r}")
    sample_ids = tuple(header[1:])
    if not sample_ids:
        raise EmptyMatrix(f"{path}: header names no samples")
    seen_samples = set()
    for sid in sample_ids:
        if sid in seen_samples:
            raise DuplicateSample(f"{path}: duplicate sample id {sid!r}")
        seen_samples.add(sid)

    feature_ids: list[str] = []
    seen_features: set[str] = set()
    values: list[list[float]] = []
    for line_no, row in rows[1:]:
        if len(row) != len(sample_ids) + 1:
            raise ParseError(
                path, line_no, f"expected {len(sample_ids) + 1} columns, got {len(row)}"
            )
        fid = row[0]
        if fid in seen_features:
            raise DuplicateFeature(f"{path}:{line_no}: duplicate feature id {fid!r}")
        seen_features.add(fid)
        parsed: list[float] = []
        missing_at: list[int] = []
        for j, cell in enumerate(row[1:]):
            if cell.strip() in MISSING_TOKENS:
                if missing == "reject":
                    raise ParseError(path, line_no, f"missing value in column {j + 2}")
                missing_at.append(j)
                parsed.append(0.0)
            else:
                parsed.append(_parse_cell(cell, path, line_no))
        if missing_at:
            present = [v for j, v in enumerate(parsed) if j not in set(missing_at)]
            if not present:
                raise ParseError(path, line_no, "all values missing; cannot impute row mean")
            mean = sum(present) / len(present)
            for j in missing_at:
                parsed[j] = mean
        feature_ids.append(fid)
        values.append(parsed)
    if not feature_ids:
        raise EmptyMatrix(f"{path}: no feature rows")
    return ExpressionMatrix(tuple(feature_ids), sample_ids, np.array(values), view_kind)


def write_expression_csv(m: ExpressionMatrix, path: str | Path) -> None:
    """Write a matrix in the expression CSV layout (LF line endings)."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["feature_id", *m.sample_ids])
            for i, fid in enumerate(m.feature_ids):
                writer.writerow([fid, *(repr(float(v)) for v in m.values[i])])
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def _read_two_column_tsv(path: Path) -> list[tuple[int, str, str]]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        out = []
        for line_no, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(path, line_no, f"expected 2 tab-separated columns, got {len(row)}")
            out.append((line_no, row[0], row[1]))
    return out


def read_labels_tsv(path: str | Path) -> dict[str, str]:
    """Parse ``sample_id<TAB>label`` lines into a map; ids must be unique."""
    path = Path(path)
    labels: dict[str, str] = {}
    for line_no, sid, label in _read_two_column_tsv(path):
        if sid in labels:
            raise DuplicateSample(f"{path}:{line_no}: duplicate sample id {sid!r}")
        labels[sid] = label
    return labels


def write_labels_tsv(labels: Mapping[str, str], path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            for sid in labels:
                fh.write(f"{sid}\t{labels[sid]}\n")
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def read_target_pairs_tsv(path: str | Path) -> TargetPairTable:
    """Parse ``miRNA_id<TAB>gene_id`` lines; duplicates collapse to a set."""
    path = Path(path)
    return TargetPairTable.from_pairs(
        (mirna, gene) for _, mirna, gene in _read_two_column_tsv(path)
    )


def write_target_pairs_tsv(table: TargetPairTable, path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            for mirna, gene in sorted(table.pairs):
                fh.write(f"{mirna}\t{gene}\n")
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def zscore_per_feature(m: ExpressionMatrix) -> ExpressionMatrix:
    """Standardize each feature row to mean 0, population std 1.

    Constant rows map to all-zero rows. Idempotent up to float rounding.
    """
    if m.n_samples < 2:
        raise TooFewSamples(f"z-scoring needs >= 2 samples, got {m.n_samples}")
    means = m.values.mean(axis=1, keepdims=True)
    stds = m.values.std(axis=1, keepdims=True)
    stds[stds == 0.0] = 1.0
    return ExpressionMatrix(m.feature_ids, m.sample_ids, (m.values - means) / stds, m.view_kind)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "classes": list(report.classes),
        "per_class": {
            label: {
                "precision": prf.precision,
                "recall": prf.recall,
                "f1": prf.f1,
                "support": report.support[label],
            }
            for label, prf in report.per_class.items()
        },
        "weighted": {
            "precision": report.weighted.precision,
            "recall": report.weighted.recall,
            "f1": report.weighted.f1,
        },
        "iterations": [
            {
                "iteration": rec.iteration,
                "promoted_count": rec.promoted_count,
                "promoted_per_class": dict(rec.promoted_per_class),
                "training_size": rec.training_size,
                "weighted_f1": rec.weighted_f1,
                "dropped_features": rec.dropped_features,
            }
            for rec in report.iterations
        ],
    }


def report_from_dict(data: dict) -> EvalReport:
    per_class = {
        label: PRF(cell["precision"], cell["recall"], cell["f1"])
        for label, cell in data["per_class"].items()
    }
    support = {label: cell["support"] for label, cell in data["per_class"].items()}
    weighted = PRF(**data["weighted"])
    iterations = tuple(
        IterationRecord(
            iteration=rec["iteration"],
            promoted_per_class=dict(rec["promoted_per_class"]),
            training_size=rec["training_size"],
            weighted_f1=rec["weighted_f1"],
            dropped_features=rec.get("dropped_features", 0),
        )
        for rec in data["iterations"]
    )
    return EvalReport(tuple(data["classes"]), per_class, weighted, support, iterations)


def write_report_json(report: EvalReport, path: str | Path) -> None:
    """Serialize a report with stable key order (diffable golden files)."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            json.dump(report_to_dict(report), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def read_report_json(path: str | Path) -> EvalReport:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))
