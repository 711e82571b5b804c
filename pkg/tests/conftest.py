"""Shared helpers for the test suite."""

import numpy as np
import pytest

from cotrain.data_model import ExpressionMatrix, LabeledDataset, ViewKind


def make_matrix(feature_ids, sample_ids, values, view=ViewKind.MIRNA):
    return ExpressionMatrix(tuple(feature_ids), tuple(sample_ids), np.asarray(values, dtype=float), view)


def random_matrix(rng, n_features, n_samples, view=ViewKind.MIRNA, prefix="f"):
    return make_matrix(
        [f"{prefix}{i}" for i in range(n_features)],
        [f"s{j}" for j in range(n_samples)],
        rng.standard_normal((n_features, n_samples)),
        view,
    )


def two_cloud_dataset(rng, n_per_class, n_features, gap, view=ViewKind.MIRNA, id_prefix="s"):
    """Two well-separated Gaussian clouds as a labeled dataset."""
    n = 2 * n_per_class
    values = rng.standard_normal((n_features, n))
    values[0, n_per_class:] += gap
    labels = ("a",) * n_per_class + ("b",) * n_per_class
    matrix = make_matrix(
        [f"f{i}" for i in range(n_features)],
        [f"{id_prefix}{j}" for j in range(n)],
        values,
        view,
    )
    return LabeledDataset(matrix, labels)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
