import numpy as np
import pytest

from cotrain.data_model import ViewKind
from cotrain.errors import ConfigError, EmptyTable, NoCoverage, ViewMismatch
from cotrain.view_mapping import (
    TargetPairTable,
    convert_to_gene,
    convert_to_mirna,
    covered_features,
)

from conftest import make_matrix


def brute_force_map(source, pairs, target_panel, source_is_gene):
    """Independent double-loop mean over the pair relation."""
    out = {}
    for fid in target_panel:
        partners = [
            (g if source_is_gene else m)
            for m, g in pairs
            if (m if source_is_gene else g) == fid
        ]
        partners = [p for p in partners if p in source.feature_index]
        if not partners:
            continue
        row = []
        for s in range(source.n_samples):
            total = 0.0
            for p in sorted(partners):
                total += source.values[source.feature_index[p], s]
            row.append(total / len(partners))
        out[fid] = row
    return out


class TestConvertToMirna:
    def test_mean_of_two_targets(self):
        genes = make_matrix(["g1", "g2"], ["s"], [[2.0], [4.0]], ViewKind.GENE)
        table = TargetPairTable.from_pairs([("m1", "g1"), ("m1", "g2"), ("m2", "g1")])
        out = convert_to_mirna(genes, table, ["m1", "m2"])
        assert out.view_kind is ViewKind.MIRNA
        assert out.feature_ids == ("m1", "m2")
        assert out.sample_ids == ("s",)
        assert out.values[:, 0].tolist() == [3.0, 2.0]

    def test_single_target_is_copy(self):
        genes = make_matrix(["g1"], ["s1", "s2"], [[1.5, -2.5]], ViewKind.GENE)
        table = TargetPairTable.from_pairs([("m1", "g1")])
        out = convert_to_mirna(genes, table, ["m1"])
        assert np.array_equal(out.values, genes.values)

    def test_random_vs_brute_force(self, rng):
        for _ in range(50):
            n_m = int(rng.integers(1, 21))
            n_g = int(rng.integers(1, 21))
            n_s = int(rng.integers(1, 11))
            mirnas = [f"m{i}" for i in range(n_m)]
            genes_ids = [f"g{i}" for i in range(n_g)]
            pairs = {
                (mirnas[rng.integers(0, n_m)], genes_ids[rng.integers(0, n_g)])
                for _ in range(rng.integers(1, 4 * max(n_m, n_g)))
            }
            genes = make_matrix(genes_ids, [f"s{j}" for j in range(n_s)],
                                rng.standard_normal((n_g, n_s)), ViewKind.GENE)
            table = TargetPairTable.from_pairs(pairs)
            ref = brute_force_map(genes, pairs, mirnas, source_is_gene=True)
            if not ref:
                with pytest.raises(NoCoverage):
                    convert_to_mirna(genes, table, mirnas)
                continue
            out = convert_to_mirna(genes, table, mirnas)
            assert out.feature_ids == tuple(f for f in mirnas if f in ref)
            for fid, row in ref.items():
                got = out.values[out.feature_index[fid]]
                assert np.allclose(got, row, atol=1e-12, rtol=0.0)

    def test_requires_gene_view(self):
        m = make_matrix(["x"], ["s"], [[1.0]], ViewKind.MIRNA)
        with pytest.raises(ViewMismatch):
            convert_to_mirna(m, TargetPairTable.from_pairs([("a", "b")]), ["a"])


class TestConvertToGene:
    def test_mean_of_targeting_mirnas(self):
        mirnas = make_matrix(["m1", "m2"], ["s"], [[1.0], [3.0]], ViewKind.MIRNA)
        table = TargetPairTable.from_pairs([("m1", "g1"), ("m2", "g1")])
        out = convert_to_gene(mirnas, table, ["g1"])
        assert out.values[0, 0] == 2.0
        assert out.view_kind is ViewKind.GENE

    def test_single_mirna_is_copy(self):
        mirnas = make_matrix(["m1"], ["s1", "s2"], [[0.25, 9.0]], ViewKind.MIRNA)
        table = TargetPairTable.from_pairs([("m1", "g7")])
        out = convert_to_gene(mirnas, table, ["g7"])
        assert np.array_equal(out.values, mirnas.values)

    def test_random_vs_brute_force(self, rng):
        for _ in range(50):
            n_m = int(rng.integers(1, 21))
            n_g = int(rng.integers(1, 21))
            n_s = int(rng.integers(1, 11))
            mirna_ids = [f"m{i}" for i in range(n_m)]
            gene_ids = [f"g{i}" for i in range(n_g)]
            pairs = {
                (mirna_ids[rng.integers(0, n_m)], gene_ids[rng.integers(0, n_g)])
                for _ in range(rng.integers(1, 4 * max(n_m, n_g)))
            }
            mirnas = make_matrix(mirna_ids, [f"s{j}" for j in range(n_s)],
                                 rng.standard_normal((n_m, n_s)), ViewKind.MIRNA)
            table = TargetPairTable.from_pairs(pairs)
            ref = brute_force_map(mirnas, pairs, gene_ids, source_is_gene=False)
            if not ref:
                with pytest.raises(NoCoverage):
                    convert_to_gene(mirnas, table, gene_ids)
                continue
            out = convert_to_gene(mirnas, table, gene_ids)
            for fid, row in ref.items():
                got = out.values[out.feature_index[fid]]
                assert np.allclose(got, row, atol=1e-12, rtol=0.0)


class TestMappingProperties:
    def test_sample_ids_preserved(self, rng):
        genes = make_matrix(["g1", "g2"], ["a", "b", "c"],
                            rng.standard_normal((2, 3)), ViewKind.GENE)
        table = TargetPairTable.from_pairs([("m1", "g1"), ("m2", "g2")])
        out = convert_to_mirna(genes, table, ["m1", "m2"])
        assert out.sample_ids == genes.sample_ids

    def test_linearity(self, rng):
        gene_ids = [f"g{i}" for i in range(6)]
        pairs = {(f"m{i}", gene_ids[j]) for i in range(4) for j in range(6) if (i + j) % 2 == 0}
        table = TargetPairTable.from_pairs(pairs)
        panel = [f"m{i}" for i in range(4)]
        x = rng.standard_normal((6, 5))
        y = rng.standard_normal((6, 5))
        a, b = rng.standard_normal(2)
        mk = lambda v: make_matrix(gene_ids, [f"s{j}" for j in range(5)], v, ViewKind.GENE)
        combined = convert_to_mirna(mk(a * x + b * y), table, panel)
        fx = convert_to_mirna(mk(x), table, panel)
        fy = convert_to_mirna(mk(y), table, panel)
        assert np.allclose(combined.values, a * fx.values + b * fy.values, atol=1e-12)

    def test_bijective_round_trip_exact(self, rng):
        n = 8
        table = TargetPairTable.from_pairs([(f"m{i}", f"g{i}") for i in range(n)])
        gene_ids = [f"g{i}" for i in range(n)]
        mirna_panel = [f"m{i}" for i in range(n)]
        genes = make_matrix(gene_ids, [f"s{j}" for j in range(5)],
                            rng.standard_normal((n, 5)), ViewKind.GENE)
        as_mirna = convert_to_mirna(genes, table, mirna_panel)
        back = convert_to_gene(as_mirna, table, gene_ids)
        assert back.feature_ids == genes.feature_ids
        assert np.array_equal(back.values, genes.values)

    def test_uncovered_panel_features_dropped(self):
        genes = make_matrix(["g1"], ["s"], [[1.0]], ViewKind.GENE)
        table = TargetPairTable.from_pairs([("m1", "g1"), ("m2", "g9")])
        out = convert_to_mirna(genes, table, ["m1", "m2", "m3"])
        assert out.feature_ids == ("m1",)

    def test_absent_sources_ignored(self):
        genes = make_matrix(["g1"], ["s"], [[4.0]], ViewKind.GENE)
        table = TargetPairTable.from_pairs([("m1", "g1"), ("m1", "g_absent")])
        out = convert_to_mirna(genes, table, ["m1"])
        assert out.values[0, 0] == 4.0

    def test_errors(self):
        genes = make_matrix(["g1"], ["s"], [[1.0]], ViewKind.GENE)
        with pytest.raises(EmptyTable):
            convert_to_mirna(genes, TargetPairTable(frozenset()), ["m1"])
        table = TargetPairTable.from_pairs([("m1", "gX")])
        with pytest.raises(NoCoverage):
            convert_to_mirna(genes, table, ["m1"])
        with pytest.raises(ConfigError):
            convert_to_mirna(genes, table, [])


def test_covered_features_split():
    table = TargetPairTable.from_pairs([("m1", "g1"), ("m2", "g2")])
    covered, uncovered = covered_features(table, ["m1", "m2", "m3"], ["g1"], ViewKind.MIRNA)
    assert covered == ["m1"]
    assert uncovered == ["m2", "m3"]
