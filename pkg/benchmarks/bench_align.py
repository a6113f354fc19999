#!/usr/bin/env python3
"""Benchmark the alignment kernels: numba @njit vs the numpy/python
fallback.

Times the two hot paths (segment distance matrix + DP table fill) over
batches of random descriptor pairs at several segment counts.

Run:  python3 benchmarks/bench_align.py [--pairs 200] [--sizes 8,16,32]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from trendsketch import _kernels


def random_side(rng, n, d=1):
    return (
        rng.uniform(0, 1.5, n),                 # lengths
        rng.uniform(0, 1, (n, d)),              # spatial midpoints
        rng.uniform(0, 1, n),                   # temporal midpoints
        rng.uniform(-5, 5, (n, d)),             # velocities
    )


def run_backend(dist_fn, fill_fn, pairs, weights):
    w_len, w_mid, w_time, w_vel, v_max, w_skip, w_stretch = weights
    total = 0.0
    start = time.perf_counter()
    for a, b in pairs:
        D = dist_fn(*a, *b, w_len, w_mid, w_time, w_vel, v_max)
        C = fill_fn(D, w_skip, w_stretch)
        m, n = D.shape
        total += min(C[m, n, 0], C[m, n, 1], C[m, n, 2])
    elapsed = time.perf_counter() - start
    return elapsed, total


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--sizes", default="8,16,32,64")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _kernels.seg_distance_matrix_numba is None:
        print("numba not available; nothing to compare")
        return

    rng = np.random.default_rng(args.seed)
    weights = (1.0, 1.0, 1.0, 1.0, 10.0, 1.0, 0.2)
    sizes = [int(s) for s in args.sizes.split(",")]

    # trigger jit compilation outside the timed region
    warm = [(random_side(rng, 3), random_side(rng, 3))]
    run_backend(_kernels.seg_distance_matrix_numba, _kernels.fill_align_table_numba, warm, weights)

    print(f"{'segs':>6} {'pairs':>6} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for n in sizes:
        pairs = [
            (random_side(rng, n), random_side(rng, n)) for _ in range(args.pairs)
        ]
        t_np, s_np = run_backend(
            _kernels.seg_distance_matrix_numpy, _kernels.fill_align_table_numpy, pairs, weights
        )
        t_nb, s_nb = run_backend(
            _kernels.seg_distance_matrix_numba, _kernels.fill_align_table_numba, pairs, weights
        )
        assert abs(s_np - s_nb) < 1e-6 * max(1.0, abs(s_np)), "backends disagree"
        print(f"{n:>6} {args.pairs:>6} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
