#!/usr/bin/env python3
"""Time the hot kernels on both backends: numba-compiled vs pure numpy.

Run as ``python benchmarks/bench_kernels.py``.  The numba path needs numba
importable; compile time is excluded by a warmup call.
"""

import time

import numpy as np

from ctqw import kernels


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jacobi(sizes=(50, 100, 200)):
    try:
        import numba
    except ImportError:
        print("numba unavailable; nothing to compare")
        return
    fast = numba.njit(cache=True)(kernels._jacobi_eigh_impl)
    rng = np.random.default_rng(1)
    print(f"{'jacobi_eigh':>18s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for n in sizes:
        m = rng.standard_normal((n, n))
        m = (m + m.T) / 2.0
        fast(m.copy())  # compile
        t_np = _time(lambda: kernels._jacobi_eigh_impl(m.copy()))
        t_nb = _time(lambda: fast(m.copy()))
        print(f"{f'n={n}':>18s} {t_np:12.4f} {t_nb:12.4f} {t_np / t_nb:8.1f}x")


def bench_cycle_grid(cases=((100, 201, 100), (150, 101, 150))):
    try:
        import numba
    except ImportError:
        return
    fast = numba.njit(cache=True)(kernels._cycle_prob_grid_loops)
    print(f"{'cycle_prob_grid':>18s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for n, nt, nk in cases:
        ts = np.linspace(0.0, 10.0, nt)
        ks = np.arange(nk, dtype=np.int64)
        fast(n, 0.2, n // 2, ks, ts[:1])  # compile
        t_np = _time(lambda: kernels._cycle_prob_grid_numpy(n, 0.2, n // 2, ks, ts), repeat=3)
        t_nb = _time(lambda: fast(n, 0.2, n // 2, ks, ts), repeat=3)
        label = f"n={n} t×k={nt}×{nk}"
        print(f"{label:>18s} {t_np:12.4f} {t_nb:12.4f} {t_np / t_nb:8.1f}x")


def main():
    print(f"backend selected by CTQW_NUMBA: numba_enabled={kernels.NUMBA_ENABLED}")
    bench_jacobi()
    bench_cycle_grid()


if __name__ == "__main__":
    main()
