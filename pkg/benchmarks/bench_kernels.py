"""Time the numba and numpy kernel backends on the hot paths.

Run with ``python3 benchmarks/bench_kernels.py``. The first numba call of each
kernel is excluded (compilation / cache load).
"""

import time

import numpy as np

from tkfit._kernels import _numba, _numpy


def bench(fn, *args, repeat=5):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    if _numba is None:
        print("numba backend disabled (TKFIT_NO_NUMBA set); nothing to compare")
        return
    rng = np.random.default_rng(0)
    y = np.sort(rng.random(100_000))
    t = np.linspace(0.0, 1.0, 2001)
    gamma = np.sort(rng.random(2001))
    gamma[0] = 0.0
    y_ext = np.concatenate(([0.0], np.sort(rng.random(2000)), [1.0]))
    qk = np.concatenate(([np.nan], np.linspace(0.01, 0.99, 2000)))
    bridge = rng.standard_normal((1000, 600))
    i1 = np.arange(0, 200)
    i2 = np.arange(400, 600)
    s3, t3 = np.meshgrid(np.arange(200, 300), np.arange(300, 400), indexing="ij")
    s3, t3 = s3.ravel(), t3.ravel()
    a = np.full(2000, 3.0)
    b = np.full(2000, 50.0)
    p = rng.random(2000)

    cases = [
        ("trimmed_kd_sorted n=1e5", "trimmed_kd_sorted", (y, 0.1)),
        ("trimmed_kd_stat n=1e5", "trimmed_kd_stat", (y, 0.1)),
        ("band_distance m=2001", "band_distance", (t, gamma, 0.1, 1e-7)),
        ("kuiper_min_ratio n=2000", "kuiper_min_ratio", (y_ext, qk, 2000, 1e-12)),
        ("limit_functional 1000x600", "limit_functional", (bridge, i1, i2, s3, t3)),
        ("betaincinv x2000", "betaincinv", (a, b, p)),
        ("norm_ppf x1e5", "norm_ppf", (y[1:-1],)),
    ]
    print(f"{'kernel':32s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, fn, args in cases:
        tn = bench(getattr(_numba, fn), *args)
        tp = bench(getattr(_numpy, fn), *args, repeat=2)
        print(f"{name:32s} {tn * 1e3:11.3f} {tp * 1e3:11.3f} {tp / tn:8.1f}")


if __name__ == "__main__":
    main()
