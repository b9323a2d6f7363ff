"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two hot kernels (lattice recursion and direct summation) on
synthetic workloads of increasing size and prints a timing table.  Usage:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from bogofock import _kernels_numba, _kernels_numpy


def _random_inputs(rng, m):
    a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    coeff = (a + a.T) / 2
    y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return coeff, y


def bench_lattice(impl, coeff, y, shape, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        impl.hermite_lattice(coeff, y, shape)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kan(impl, v, quad, lin, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        impl.kan_sum(v, quad, lin, True)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'kernel':<26} {'numba':>12} {'numpy':>12} {'speedup':>9}")

    for m, extent in [(2, 24), (4, 10), (6, 5), (8, 4)]:
        coeff, y = _random_inputs(rng, m)
        shape = np.full(m, extent, dtype=np.int64)
        _kernels_numba.hermite_lattice(coeff, y, shape)  # JIT warmup
        t_nb = bench_lattice(_kernels_numba, coeff, y, shape, args.repeats)
        t_np = bench_lattice(_kernels_numpy, coeff, y, shape, args.repeats)
        label = f"lattice M={m} n={extent}^{m}"
        print(f"{label:<26} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")

    for m, per_index in [(3, 4), (5, 3), (6, 4), (8, 3)]:
        coeff, _ = _random_inputs(rng, m)
        lin = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        v = np.full(m, per_index, dtype=np.int64)
        _kernels_numba.kan_sum(v, coeff, lin, True)  # JIT warmup
        t_nb = bench_kan(_kernels_numba, v, coeff, lin, args.repeats)
        t_np = bench_kan(_kernels_numpy, v, coeff, lin, args.repeats)
        label = f"kan M={m} v={per_index}*{m}"
        print(f"{label:<26} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
