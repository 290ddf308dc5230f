#!/usr/bin/env python3
"""Benchmark the compiled kernel against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from crowdlens import kernels

PARAMS = dict(gamma=1.0, beta=2.77, w1=0.5, w2=0.5,
              pts=0.08, social_radius=3.6, alone_distance=10.0)

SIZES = [(500, 20), (500, 50), (300, 100), (200, 200)]


def synthetic(frames, peds, seed=0):
    rng = np.random.default_rng(seed)
    return (
        rng.uniform(-30, 30, (frames, peds)),
        rng.uniform(-30, 30, (frames, peds)),
        rng.uniform(0, 0.25, (frames, peds)),
        rng.uniform(-180, 180, (frames, peds)),
        (rng.random((frames, peds)) < 0.9).astype(np.uint8),
    )


def bench(module, data, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        module.scene_stats(*data, *PARAMS.values())
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    py = kernels.load_backend("python")
    try:
        cy = kernels.load_backend("cython")
    except ImportError:
        cy = None
        print("compiled backend not built; timing NumPy fallback only\n")

    print(f"active backend: {kernels.BACKEND}")
    header = f"{'frames':>7} {'peds':>5} {'numpy':>10} {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for frames, peds in SIZES:
        data = synthetic(frames, peds)
        t_py = bench(py, data, args.repeats)
        if cy is not None:
            t_cy = bench(cy, data, args.repeats)
            print(f"{frames:>7} {peds:>5} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>7.1f}x")
        else:
            print(f"{frames:>7} {peds:>5} {t_py:>9.4f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
