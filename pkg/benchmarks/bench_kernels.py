"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs on both backends with identical inputs; outputs are compared
before timings are reported.
"""
import argparse
import time

import numpy as np

from twodel import _kernels_py

try:
    from twodel import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    words = np.random.default_rng(0).integers(0, 1 << 40, size=20_000, dtype=np.uint64)
    return [
        ("greedy_coloring(s=9)", lambda m: m.greedy_coloring(9)),
        ("ct2_count(n=16, s=12)", lambda m: m.ct2_count(16, 12, True)),
        ("ct2_batch(n=40, s=24, 20k words)", lambda m: m.ct2_batch(words, 40, 24, True)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not available; run `pip install --no-build-isolation -e .`")
    print(f"{'kernel':36s} {'cython (s)':>12s} {'python (s)':>12s} {'speedup':>9s}")
    for name, fn in cases():
        tc, oc = best_of(lambda: fn(_kernels), args.repeat)
        tp, op = best_of(lambda: fn(_kernels_py), 1)
        same = np.array_equal(oc, op) if isinstance(oc, np.ndarray) else oc == op
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:36s} {tc:12.4f} {tp:12.4f} {tp / tc:8.0f}x")


if __name__ == "__main__":
    main()
