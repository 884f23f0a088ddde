"""Benchmark the numba and numpy kernel backends on a pipeline-sized
classification workload, and check they produce identical results.

Usage: python benchmarks/bench_knn.py [--repeats N]

The shape mimics one fitness evaluation at desk scale: a few hundred
training documents, up to ~150 queries, chromosome-sized feature counts.
"""

import argparse
import time

import numpy as np

from keywordga import kernels


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_case(n_train, n_test, n_features, k, n_categories, repeats, rng):
    queries = rng.random((n_test, n_features))
    points = rng.random((n_train, n_features))
    labels = rng.integers(0, n_categories, size=n_train).astype(np.int64)

    def numpy_eval():
        sq = kernels._sqdist_numpy(queries, points)
        return kernels._predict_numpy(sq, labels, n_categories, k)

    results = {"numpy": (_time(numpy_eval, repeats), numpy_eval())}
    if kernels.numba is not None:

        def numba_eval():
            sq = kernels._sqdist_numba(queries, points)
            return kernels._predict_numba(sq, labels, n_categories, k)

        numba_eval()  # compile outside the timed region
        results["numba"] = (_time(numba_eval, repeats), numba_eval())
        same_sq = np.array_equal(
            kernels._sqdist_numpy(queries, points),
            kernels._sqdist_numba(queries, points),
        )
        same_pred = np.array_equal(results["numpy"][1], results["numba"][1])
        assert same_sq and same_pred, "backends disagree"
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    cases = [
        (300, 150, 30, 1, 17),
        (300, 150, 30, 5, 17),
        (300, 150, 10, 1, 17),
        (40, 20, 18, 1, 6),
    ]
    if kernels.numba is None:
        print("numba not installed; timing the numpy fallback only")
    header = f"{'train':>6} {'test':>5} {'feat':>5} {'k':>2} | {'numpy ms':>9}"
    if kernels.numba is not None:
        header += f" {'numba ms':>9} {'speedup':>8}"
    print(header)
    for n_train, n_test, n_features, k, n_cat in cases:
        results = bench_case(n_train, n_test, n_features, k, n_cat, args.repeats, rng)
        np_ms = results["numpy"][0] * 1e3
        line = f"{n_train:>6} {n_test:>5} {n_features:>5} {k:>2} | {np_ms:>9.3f}"
        if "numba" in results:
            nb_ms = results["numba"][0] * 1e3
            line += f" {nb_ms:>9.3f} {np_ms / nb_ms:>7.1f}x"
        print(line)
    print("result equality between backends verified on every case")


if __name__ == "__main__":
    main()
