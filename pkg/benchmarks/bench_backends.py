#!/usr/bin/env python3
"""Time the numba kernels against the plain NumPy fallbacks.

Every kernel pair is checked for identical output before timing, so the
table doubles as a parity smoke test.  Run from anywhere:

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from markovlis import _kernels
from markovlis.rng import stream


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def make_cases():
    g = stream(2024, 0)
    u0 = g.random(2000)
    u = g.random((2000, 10_000))
    long_word = (g.random(100_000) < 0.5).astype(np.int64) + 1
    short_word = (g.random(18) < 0.5).astype(np.int64) + 1
    z = g.standard_normal((500, 10_000))
    return [
        ("markov_letters 2000x10000",
         lambda impl: impl["markov_letters"](u0, u, 0.3, 0.6, 0.5)),
        ("patience_lis n=100000",
         lambda impl: impl["patience_lis"](long_word)),
        ("mask_scan_lis n=18",
         lambda impl: impl["mask_scan_lis"](short_word)),
        ("path_end_and_max 500x10000",
         lambda impl: impl["path_end_and_max"](z)),
    ]


def main():
    impls = _kernels.IMPLEMENTATIONS
    if "numba" not in impls:
        print("numba backend unavailable; timing the NumPy fallback only")
    rows = []
    for label, call in make_cases():
        baseline = call(impls["numpy"])
        t_np = best_of(lambda: call(impls["numpy"]))
        if "numba" in impls:
            got = call(impls["numba"])  # first call also compiles
            same = (np.array_equal(baseline[0], got[0])
                    and np.array_equal(baseline[1], got[1])
                    ) if isinstance(baseline, tuple) else np.array_equal(
                        baseline, got)
            if not same:
                raise SystemExit(f"backend outputs differ for {label}")
            t_nb = best_of(lambda: call(impls["numba"]))
            rows.append((label, t_np, t_nb, t_np / t_nb))
        else:
            rows.append((label, t_np, None, None))
    print(f"{'kernel':34} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, t_np, t_nb, ratio in rows:
        if t_nb is None:
            print(f"{label:34} {t_np * 1e3:9.1f}ms {'-':>10} {'-':>8}")
        else:
            print(f"{label:34} {t_np * 1e3:9.1f}ms {t_nb * 1e3:9.1f}ms "
                  f"{ratio:7.1f}x")


if __name__ == "__main__":
    main()
