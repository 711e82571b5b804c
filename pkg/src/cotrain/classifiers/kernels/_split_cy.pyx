# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Gini split scan.

Mirrors ``_split_py.best_split`` operation for operation: class-count
statistics are exact int64, scores are the same two float64 divisions
plus one addition, and ties resolve by strict-greater updates. The two
backends therefore grow bit-identical trees.
"""

from libc.stdint cimport int64_t

import numpy as np


def best_split(const double[:, ::1] vals, const int64_t[::1] codes, Py_ssize_t n_classes):
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t n_rows = vals.shape[0]
    cdef Py_ssize_t r, i, j, c
    cdef int64_t s_left, s_right, s_total
    cdef double score, best_score, best_thr
    cdef Py_ssize_t best_row = -1
    cdef const int64_t[::1] order

    total_np = np.zeros(n_classes, dtype=np.int64)
    left_np = np.zeros(n_classes, dtype=np.int64)
    right_np = np.zeros(n_classes, dtype=np.int64)
    sv_np = np.empty(n, dtype=np.float64)
    sc_np = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] total = total_np
    cdef int64_t[::1] left = left_np
    cdef int64_t[::1] right = right_np
    cdef double[::1] sv = sv_np
    cdef int64_t[::1] sc = sc_np

    for i in range(n):
        total[codes[i]] += 1
    s_total = 0
    for c in range(n_classes):
        s_total += total[c] * total[c]
    best_score = <double> s_total / <double> n
    best_thr = 0.0

    for r in range(n_rows):
        order_np = np.ascontiguousarray(
            np.argsort(np.asarray(vals[r]), kind="stable"), dtype=np.int64
        )
        order = order_np
        for i in range(n):
            j = order[i]
            sv[i] = vals[r, j]
            sc[i] = codes[j]
        for c in range(n_classes):
            left[c] = 0
            right[c] = total[c]
        s_left = 0
        s_right = s_total
        for i in range(n - 1):
            c = sc[i]
            s_left += 2 * left[c] + 1
            left[c] += 1
            s_right -= 2 * right[c] - 1
            right[c] -= 1
            if sv[i] != sv[i + 1]:
                score = <double> s_left / <double> (i + 1) + <double> s_right / <double> (n - i - 1)
                if score > best_score:
                    best_score = score
                    best_row = r
                    best_thr = 0.5 * (sv[i] + sv[i + 1])

    if best_row < 0:
        return None
    return best_row, best_thr
