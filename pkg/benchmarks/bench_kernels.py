"""Time the numba kernels against their pure-numpy / interpreted twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Vectorised kernels are compared in-process through kernels.IMPLEMENTATIONS.
The sequential kernels (exhaustive search, annealing) have no vectorised twin;
their interpreted form is timed through ``.py_func`` on reduced sizes.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ap3lab import kernels
from ap3lab._backend import USE_NUMBA


def best_of(fn, repeat):
    fn()  # warm-up (JIT compile / cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def vectorised_cases(rng):
    for p in (257, 1009, 4099):
        ind = rng.random(p) < 0.5
        words, dwords = kernels.pack_bits(ind), kernels.cyclic_words(ind)
        yield "count_3aps_bitset", p, (words, dwords, p)
        ind2 = ind.copy()
        ind2[0] = False
        yield "longest_ap_scan", p, (ind2, p)
        if p <= 1009:
            yield "dft_direct_kernel", p, (rng.random(p), kernels.roots_of_unity(p))
        yield "bohr_scan", p, (rng.integers(0, p, size=3).astype(np.int64), p, p // 20)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not USE_NUMBA:
        raise SystemExit("numba backend disabled (AP3LAB_BACKEND=numpy); nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'size':>10}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, p, a in vectorised_cases(rng):
        nb, npy = kernels.IMPLEMENTATIONS[name]
        t_nb = best_of(lambda: nb(*a), args.repeat)
        t_np = best_of(lambda: npy(*a), args.repeat)
        print(f"{name:<22}{p:>10}{t_nb:>12.2e}{t_np:>12.2e}{t_np / t_nb:>10.1f}")

    fn = kernels.exhaustive_partition
    for p, s in ((13, 6), (17, 7)):
        t_nb = best_of(lambda: fn(p, s, 0, p * p, 10), args.repeat)
        t_py = best_of(lambda: fn.py_func(p, s, 0, p * p, 10), 1)
        print(f"{'exhaustive_partition':<22}{f'{p},{s}':>10}{t_nb:>12.2e}{t_py:>12.2e}{t_py / t_nb:>10.1f}")

    p, s, n = 101, 40, 5000
    members = np.sort(rng.choice(p, size=s, replace=False)).astype(np.int64)
    temps = np.geomspace(8, 0.05, n)
    rem, add, uni = rng.integers(0, s, n), rng.integers(0, p - s, n), rng.random(n)
    f = kernels.anneal_loop
    t_nb = best_of(lambda: f(p, members.copy(), temps, rem, add, uni, 1000), args.repeat)
    t_py = best_of(lambda: f.py_func(p, members.copy(), temps, rem, add, uni, 1000), 1)
    print(f"{'anneal_loop':<22}{f'{p},{s}':>10}{t_nb:>12.2e}{t_py:>12.2e}{t_py / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
