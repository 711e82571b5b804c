"""One-vs-rest linear margin classifier trained by hinge-loss SGD.

A margin-based stand-in for a kernel SVM: one binary hinge model per
class, stochastic subgradient updates with L2 regularization, features
standardized internally at fit time (expression scales vary wildly
across platforms). Confidence is the softmax over per-class margins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LinearState:
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    mean: np.ndarray  # (n_features,)
    scale: np.ndarray  # (n_features,)


def fit_linear(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    epochs: int,
    lr: float,
    reg: float,
    seed: int,
) -> LinearState:
    """Fit per-class hinge models on standardized rows of `x`.

    Deterministic given the seed: epoch sample orders come from one
    seeded permutation stream.
    """
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale = np.where(scale == 0.0, 1.0, scale)
    z = (x - mean) / scale

    n = x.shape[0]
    w = np.zeros((n_classes, x.shape[1]))
    b = np.zeros(n_classes)
    signs = -np.ones((n_classes, n_classes))
    np.fill_diagonal(signs, 1.0)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    decay = 1.0 - lr * reg
    for _ in range(epochs):
        for i in rng.permutation(n):
            xi = z[i]
            t = signs[y[i]]
            violated = t * (w @ xi + b) < 1.0
            w *= decay
            if violated.any():
                w[violated] += (lr * t[violated])[:, np.newaxis] * xi
                b[violated] += lr * t[violated]
    return LinearState(w, b, mean, scale)


def margins(state: LinearState, x: np.ndarray) -> np.ndarray:
    """(n_samples, n_classes) decision values."""
    z = (x - state.mean) / state.scale
    return z @ state.weights.T + state.bias


def probabilities(state: LinearState, x: np.ndarray) -> np.ndarray:
    """Softmax over margins, rows summing to 1."""
    m = margins(state, x)
    m = m - m.max(axis=1, keepdims=True)
    e = np.exp(m)
    return e / e.sum(axis=1, keepdims=True)
