"""Cross-view conversion through a many-to-many miRNA/gene target table.

A miRNA row is built as the arithmetic mean of its covered target genes'
rows, and a gene row as the mean of the miRNAs that target it. Features
of the requested panel with no covered counterpart are dropped from the
output (a zero fill would be a fake expression value); callers that need
to know what was dropped use :func:`covered_features`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .data_model import ExpressionMatrix, ViewKind
from .errors import ConfigError, EmptyTable, NoCoverage, ViewMismatch


@dataclass(frozen=True)
class TargetPairTable:
    """Deduplicated set of (miRNA id, gene id) target pairs."""

    pairs: frozenset[tuple[str, str]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "TargetPairTable":
        return cls(frozenset((str(m), str(g)) for m, g in pairs))

    @cached_property
    def mirna_to_genes(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for m, g in self.pairs:
            out.setdefault(m, []).append(g)
        return {m: tuple(sorted(gs)) for m, gs in out.items()}

    @cached_property
    def gene_to_mirnas(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for m, g in self.pairs:
            out.setdefault(g, []).append(m)
        return {g: tuple(sorted(ms)) for g, ms in out.items()}

    def __len__(self) -> int:
        return len(self.pairs)


def _aggregate(
    source: ExpressionMatrix,
    index: dict[str, tuple[str, ...]],
    target_panel: Sequence[str],
    out_view: ViewKind,
) -> ExpressionMatrix:
    if not target_panel:
        raise ConfigError("target panel is empty")
    src_index = source.feature_index
    kept: list[str] = []
    rows: list[np.ndarray] = []
    for fid in target_panel:
        # Counterpart ids are pre-sorted, so the mean accumulates in a
        # fixed order and results are reproducible run to run.
        hits = [src_index[s] for s in index.get(fid, ()) if s in src_index]
        if not hits:
            continue
        rows.append(source.values[hits, :].mean(axis=0))
        kept.append(fid)
    if not kept:
        raise NoCoverage(
            f"no feature of the {len(target_panel)}-feature target panel has a covered counterpart"
        )
    return ExpressionMatrix(tuple(kept), source.sample_ids, np.array(rows), out_view)


def convert_to_mirna(
    genes: ExpressionMatrix, table: TargetPairTable, target_panel: Sequence[str]
) -> ExpressionMatrix:
    """Map a gene-view matrix onto a miRNA panel by mean aggregation.

    For each requested miRNA, the output row is the mean over its target
    genes present in `genes`; sample ids carry over unchanged. Pairs
    naming genes absent from the input are ignored (partial coverage is
    the normal case with real target databases).
    """
    if genes.view_kind is not ViewKind.GENE:
        raise ViewMismatch("convert_to_mirna expects a gene-view matrix")
    if not len(table):
        raise EmptyTable("target-pair table is empty")
    return _aggregate(genes, table.mirna_to_genes, target_panel, ViewKind.MIRNA)


def convert_to_gene(
    mirnas: ExpressionMatrix, table: TargetPairTable, target_panel: Sequence[str]
) -> ExpressionMatrix:
    """Map a miRNA-view matrix onto a gene panel by mean aggregation.

    Mirror image of :func:`convert_to_mirna`: each requested gene becomes
    the mean of the miRNAs targeting it that are present in the input.
    """
    if mirnas.view_kind is not ViewKind.MIRNA:
        raise ViewMismatch("convert_to_gene expects a miRNA-view matrix")
    if not len(table):
        raise EmptyTable("target-pair table is empty")
    return _aggregate(mirnas, table.gene_to_mirnas, target_panel, ViewKind.GENE)


def covered_features(
    table: TargetPairTable,
    target_panel: Sequence[str],
    source_feature_ids: Iterable[str],
    out_view: ViewKind,
) -> tuple[list[str], list[str]]:
    """Split a target panel into (covered, uncovered) under a table.

    A panel feature is covered when at least one of its paired
    counterparts appears in `source_feature_ids`.
    """
    index = table.mirna_to_genes if out_view is ViewKind.MIRNA else table.gene_to_mirnas
    available = set(source_feature_ids)
    covered, uncovered = [], []
    for fid in target_panel:
        if any(s in available for s in index.get(fid, ())):
            covered.append(fid)
        else:
            uncovered.append(fid)
    return covered, uncovered
