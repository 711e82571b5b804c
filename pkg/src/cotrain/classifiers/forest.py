"""Random forest over sample columns with id-keyed bootstrap sampling.

Determinism contract: one master seed; tree ``t`` draws from the
substream seeded by ``SeedSequence((seed, t))``. Bootstrap draws index
into the id-sorted sample list, so permuting the training matrix's
column order changes nothing. Split candidates are drawn per node and
scanned in ascending feature order; equal-quality splits resolve to the
lowest feature index, then the lowest threshold (see the kernel).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class Tree:
    """Array-encoded binary tree; `feature` is -1 at leaves."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_class: np.ndarray


def _grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    rng: np.random.Generator,
    max_depth: int | None,
    k_features: int,
) -> Tree:
    # x: (n_samples, n_features) C-order float64; y: (n_samples,) int64.
    n, m = x.shape
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    leaf_class: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_class.append(-1)
        return len(feature) - 1

    root = new_node()
    stack: list[tuple[np.ndarray, int, int]] = [(np.arange(n), 0, root)]
    while stack:
        idx, depth, nid = stack.pop()
        counts = np.bincount(y[idx], minlength=n_classes)
        majority = int(np.argmax(counts))  # ties: lowest class index
        pure = counts[majority] == idx.size
        if pure or idx.size < 2 or (max_depth is not None and depth >= max_depth):
            leaf_class[nid] = majority
            continue
        cand = rng.choice(m, size=k_features, replace=False)
        cand.sort()
        sub = np.ascontiguousarray(x[np.ix_(idx, cand)].T)
        codes = np.ascontiguousarray(y[idx])
        hit = kernels.best_split(sub, codes, n_classes)
        if hit is None:
            leaf_class[nid] = majority
            continue
        row, thr = hit
        f = int(cand[row])
        mask = x[idx, f] <= thr
        feature[nid] = f
        threshold[nid] = thr
        lid = new_node()
        rid = new_node()
        left[nid] = lid
        right[nid] = rid
        stack.append((idx[~mask], depth + 1, rid))
        stack.append((idx[mask], depth + 1, lid))
    return Tree(
        np.array(feature, dtype=np.int32),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int32),
        np.array(right, dtype=np.int32),
        np.array(leaf_class, dtype=np.int32),
    )


def fit_forest(
    x: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    sorted_positions: np.ndarray,
    n_trees: int,
    max_depth: int | None,
    k_features: int,
    seed: int,
) -> tuple[Tree, ...]:
    """Fit `n_trees` trees on bootstrap resamples of the rows of `x`.

    `sorted_positions[i]` is the row whose sample id ranks i-th
    lexicographically; bootstrap draws go through it so the resample is
    a function of sample ids, not of column order.
    """
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng(np.random.SeedSequence((seed, t)))
        draws = rng.integers(0, x.shape[0], size=x.shape[0])
        boot = sorted_positions[draws]
        trees.append(_grow_tree(x[boot], y[boot], n_classes, rng, max_depth, k_features))
    return tuple(trees)


def predict_tree(tree: Tree, x: np.ndarray) -> np.ndarray:
    """Class codes for each row of `x` (samples x features)."""
    out = np.empty(x.shape[0], dtype=np.int64)
    stack: list[tuple[int, np.ndarray]] = [(0, np.arange(x.shape[0]))]
    while stack:
        nid, idx = stack.pop()
        if idx.size == 0:
            continue
        f = tree.feature[nid]
        if f < 0:
            out[idx] = tree.leaf_class[nid]
            continue
        mask = x[idx, f] <= tree.threshold[nid]
        stack.append((int(tree.left[nid]), idx[mask]))
        stack.append((int(tree.right[nid]), idx[~mask]))
    return out


def forest_votes(trees: tuple[Tree, ...], x: np.ndarray, n_classes: int) -> np.ndarray:
    """(n_samples, n_classes) vote tallies across the forest."""
    votes = np.zeros((x.shape[0], n_classes), dtype=np.int64)
    for tree in trees:
        pred = predict_tree(tree, x)
        votes[np.arange(x.shape[0]), pred] += 1
    return votes
