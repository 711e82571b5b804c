#!/usr/bin/env python3
"""Benchmark the compiled split kernel against the pure-numpy fallback.

Times raw best-split scans and whole forest fits on synthetic Gaussian
data, and verifies along the way that the two backends produce identical
splits and identical forests (they are designed to match bit for bit).

    python3 benchmarks/bench_split_kernel.py [--samples N] [--features M]
                                             [--trees T] [--repeats R]
"""

import argparse
import sys
import time

import numpy as np

from cotrain.classifiers import ClassifierSpec, kernels, predict_with_confidence, train
from cotrain.data_model import ExpressionMatrix, LabeledDataset, ViewKind


def bench_raw_kernel(rng, n_samples, n_candidates, n_classes, repeats):
    vals = np.ascontiguousarray(rng.standard_normal((n_candidates, n_samples)))
    codes = np.ascontiguousarray(rng.integers(0, n_classes, n_samples).astype(np.int64))
    timings = {}
    reference = None
    for backend in kernels.available_backends():
        fn = getattr(kernels, "_BACKENDS")[backend]
        fn(vals, codes, n_classes)  # warm up
        start = time.perf_counter()
        for _ in range(repeats):
            result = fn(vals, codes, n_classes)
        timings[backend] = (time.perf_counter() - start) / repeats
        if reference is None:
            reference = result
        elif result != reference:
            sys.exit(f"backend mismatch on raw kernel: {result} != {reference}")
    return timings


def bench_forest_fit(rng, n_samples, n_features, n_trees, repeats):
    values = rng.standard_normal((n_features, n_samples))
    labels = tuple(f"c{i % 2}" for i in range(n_samples))
    values[0, np.array([lab == "c1" for lab in labels])] += 1.5
    data = LabeledDataset(
        ExpressionMatrix(
            tuple(f"f{i:04d}" for i in range(n_features)),
            tuple(f"s{j:05d}" for j in range(n_samples)),
            values,
            ViewKind.MIRNA,
        ),
        labels,
    )
    probe = ExpressionMatrix(
        data.matrix.feature_ids,
        tuple(f"p{j:05d}" for j in range(200)),
        rng.standard_normal((n_features, 200)),
        ViewKind.MIRNA,
    )
    spec = ClassifierSpec(n_trees=n_trees, seed=123)
    timings = {}
    reference = None
    for backend in kernels.available_backends():
        kernels.use_backend(backend)
        train(spec, data)  # warm up
        start = time.perf_counter()
        for _ in range(repeats):
            model = train(spec, data)
        timings[backend] = (time.perf_counter() - start) / repeats
        preds = [(p.label, p.confidence) for p in predict_with_confidence(model, probe)]
        if reference is None:
            reference = preds
        elif preds != reference:
            sys.exit("backend mismatch: forests differ between kernels")
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--features", type=int, default=100)
    parser.add_argument("--trees", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if "compiled" not in kernels.available_backends():
        print("compiled kernel not built; only the python backend is available")

    rng = np.random.default_rng(0)
    print(f"raw split scan: {args.features} candidates x {args.samples} samples")
    raw = bench_raw_kernel(rng, args.samples, args.features, 3, args.repeats * 10)
    for backend, seconds in sorted(raw.items()):
        print(f"  {backend:<10} {seconds * 1e3:8.2f} ms/scan")

    print(f"forest fit: {args.trees} trees, {args.samples} samples x {args.features} features")
    fit = bench_forest_fit(rng, args.samples, args.features, args.trees, args.repeats)
    for backend, seconds in sorted(fit.items()):
        print(f"  {backend:<10} {seconds:8.3f} s/fit")
    if len(fit) == 2:
        print(f"  speedup    {fit['python'] / fit['compiled']:8.2f}x (fit)")
        print("  outputs verified identical across backends")


if __name__ == "__main__":
    main()
