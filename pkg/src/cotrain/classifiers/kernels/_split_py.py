"""Pure-numpy Gini split scan; the fallback when the extension is absent.

Split quality is ranked by sum(left_class_counts^2)/n_left +
sum(right_class_counts^2)/n_right, which orders splits identically to
Gini impurity reduction while staying a ratio of exact integers. Both
backends evaluate that ratio in float64 with the same operation order,
so they pick bit-identical splits.
"""

from __future__ import annotations

import numpy as np


def best_split(vals: np.ndarray, codes: np.ndarray, n_classes: int):
    """Scan candidate feature rows for the best binary split.

    vals: (n_candidates, n_node) float64, one row per candidate feature.
    codes: (n_node,) int64 class codes in [0, n_classes).
    Returns (row, threshold) or None when no split strictly beats the
    parent. Ties keep the lowest row, then the lowest threshold;
    thresholds are midpoints between consecutive distinct sorted values.
    """
    n = codes.shape[0]
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), codes] = 1
    total = onehot.sum(axis=0)
    best_score = int(np.sum(total * total)) / n
    best_row = -1
    best_thr = 0.0
    for row in range(vals.shape[0]):
        v = vals[row]
        order = np.argsort(v, kind="stable")
        sv = v[order]
        cuts = np.nonzero(sv[:-1] != sv[1:])[0]
        if cuts.size == 0:
            continue
        cum = np.cumsum(onehot[order], axis=0)
        left = cum[cuts]
        right = total[np.newaxis, :] - left
        n_left = cuts + 1
        score = np.sum(left * left, axis=1) / n_left + np.sum(right * right, axis=1) / (n - n_left)
        j = int(np.argmax(score))
        if score[j] > best_score:
            best_score = float(score[j])
            best_row = row
            cut = int(cuts[j])
            best_thr = 0.5 * (float(sv[cut]) + float(sv[cut + 1]))
    if best_row < 0:
        return None
    return best_row, best_thr
