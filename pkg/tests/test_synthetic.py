import numpy as np
import pytest

from cotrain.classifiers import ClassifierSpec, predict_with_confidence, train
from cotrain.errors import ConfigError
from cotrain.metrics import weighted_f1
from cotrain.synthetic import SyntheticSpec, generate, write_dataset


class TestSpecValidation:
    def test_invalid(self):
        with pytest.raises(ConfigError):
            SyntheticSpec(n_classes=1)
        with pytest.raises(ConfigError):
            SyntheticSpec(n_classes=3, features_per_view=2)
        with pytest.raises(ConfigError):
            SyntheticSpec(label_noise=0.5)
        with pytest.raises(ConfigError):
            SyntheticSpec(class_separation=-1.0)
        with pytest.raises(ConfigError):
            SyntheticSpec(coupling="mesh")
        with pytest.raises(ConfigError):
            SyntheticSpec(n_labeled=1)


class TestGenerate:
    def test_deterministic(self):
        a = generate(SyntheticSpec(seed=77, features_per_view=9))
        b = generate(SyntheticSpec(seed=77, features_per_view=9))
        assert a.l_mirna == b.l_mirna
        assert a.u_gene.matrix == b.u_gene.matrix
        assert a.table == b.table
        assert a.unlabeled_truth == b.unlabeled_truth

    def test_shapes_and_disjoint_ids(self):
        spec = SyntheticSpec(seed=1, n_classes=3, features_per_view=7,
                             n_labeled=9, n_unlabeled=20, n_test=11)
        data = generate(spec)
        assert data.l_mirna.matrix.values.shape == (7, 9)
        assert data.u_mirna.matrix.values.shape == (7, 20)
        assert data.test_gene.matrix.values.shape == (7, 11)
        ids = (set(data.l_mirna.matrix.sample_ids)
               | set(data.u_mirna.matrix.sample_ids)
               | set(data.test_mirna.matrix.sample_ids)
               | set(data.l_gene.matrix.sample_ids)
               | set(data.u_gene.matrix.sample_ids)
               | set(data.test_gene.matrix.sample_ids))
        assert len(ids) == 2 * (9 + 20 + 11)

    def test_every_class_in_labeled_split(self):
        data = generate(SyntheticSpec(seed=2, n_classes=4, features_per_view=8, n_labeled=9))
        assert set(data.l_mirna.labels) == {"c0", "c1", "c2", "c3"}

    def test_bijective_table(self):
        data = generate(SyntheticSpec(seed=3, features_per_view=6))
        assert len(data.table) == 6
        for m, genes in data.table.mirna_to_genes.items():
            assert len(genes) == 1

    def test_random_coupling_covers_both_sides(self):
        data = generate(SyntheticSpec(seed=4, features_per_view=12,
                                      coupling="random", coupling_density=0.1))
        assert set(data.table.mirna_to_genes) == set(data.l_mirna.matrix.feature_ids)
        assert set(data.table.gene_to_mirnas) == set(data.l_gene.matrix.feature_ids)

    def test_label_noise_flips_labeled_only(self):
        clean = generate(SyntheticSpec(seed=5, n_labeled=100, features_per_view=9))
        noisy = generate(SyntheticSpec(seed=5, n_labeled=100, features_per_view=9,
                                       label_noise=0.3))
        flips = sum(a != b for a, b in zip(clean.l_mirna.labels, noisy.l_mirna.labels))
        assert 10 <= flips <= 55
        assert clean.unlabeled_truth == noisy.unlabeled_truth

    def test_high_separation_baseline_is_strong(self):
        for seed in range(3):
            data = generate(SyntheticSpec(seed=seed, class_separation=6.0,
                                          features_per_view=9, n_labeled=40,
                                          n_unlabeled=1, n_test=200))
            model = train(ClassifierSpec(seed=seed), data.l_mirna)
            preds = predict_with_confidence(model, data.test_mirna.matrix)
            f1 = weighted_f1(list(data.test_mirna.labels), [p.label for p in preds])
            assert f1 >= 0.95

    def test_zero_separation_is_chance_level(self):
        accs = []
        for seed in range(20):
            data = generate(SyntheticSpec(seed=seed, class_separation=0.0,
                                          features_per_view=9, n_labeled=40,
                                          n_unlabeled=1, n_test=200))
            model = train(ClassifierSpec(seed=seed), data.l_mirna)
            preds = predict_with_confidence(model, data.test_mirna.matrix)
            accs.append(np.mean([p.label == t for p, t in zip(preds, data.test_mirna.labels)]))
        assert 0.4 <= float(np.mean(accs)) <= 0.6


class TestWriteDataset:
    def test_files_written_and_byte_stable(self, tmp_path):
        spec = SyntheticSpec(seed=6, features_per_view=9, n_labeled=6, n_unlabeled=8, n_test=5)
        p1 = write_dataset(generate(spec), tmp_path / "a")
        p2 = write_dataset(generate(spec), tmp_path / "b")
        assert set(p1) == {
            "mirna_labeled", "mirna_unlabeled", "mirna_test",
            "gene_labeled", "gene_unlabeled", "gene_test",
            "labels", "targets", "unlabeled_truth",
        }
        for key in p1:
            assert p1[key].read_bytes() == p2[key].read_bytes()

    def test_truth_is_separate_from_labels(self, tmp_path):
        data = generate(SyntheticSpec(seed=7, features_per_view=9, n_labeled=6,
                                      n_unlabeled=8, n_test=5))
        paths = write_dataset(data, tmp_path)
        labels_text = paths["labels"].read_text()
        for pool_sid in data.u_mirna.matrix.sample_ids:
            assert pool_sid not in labels_text
        truth_text = paths["unlabeled_truth"].read_text()
        for pool_sid in data.u_mirna.matrix.sample_ids:
            assert pool_sid in truth_text
