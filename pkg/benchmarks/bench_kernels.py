"""Benchmark the compiled kernels against the numpy fallback.

Run as a script:

    python3 benchmarks/bench_kernels.py [--sizes 500,2000,10000] [--repeats 30]

Both backends are imported directly (bypassing the import-time
dispatch) so one process can time them side by side.
"""

import argparse
import timeit

import numpy as np

from stablesep.kernels import _py

try:
    from stablesep.kernels import _cy
except ImportError:
    _cy = None


def cases(n, rng):
    x, y, z = rng.normal(size=(3, n))
    w = rng.normal(size=100)
    b = rng.uniform(0, 2 * np.pi, 100)
    rx = rng.normal(size=(n, 5))
    ry = rng.normal(size=(n, 5))
    sub = x[: min(n, 500)]
    return {
        "pearson_triple": lambda m: m.pearson_triple(x, y, z),
        "rff_transform": lambda m: m.rff_transform(x, w, b, 0.1414),
        "median_pairwise_distance": lambda m: m.median_pairwise_distance(sub),
        "rowwise_outer": lambda m: m.rowwise_outer(rx, ry),
    }


def best_ms(fn, repeats):
    t = timeit.repeat(fn, number=1, repeat=repeats)
    return 1000.0 * min(t)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="500,2000,10000",
                    help="comma-separated input lengths")
    ap.add_argument("--repeats", type=int, default=30,
                    help="timing repetitions per case (min is reported)")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    if _cy is None:
        print("compiled backend not available; timing the numpy fallback only")
    rng = np.random.default_rng(0)
    header = f"{'kernel':<26} {'n':>7} {'numpy ms':>10} {'compiled ms':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for name, call in cases(n, rng).items():
            py_ms = best_ms(lambda: call(_py), args.repeats)
            if _cy is None:
                print(f"{name:<26} {n:>7} {py_ms:>10.3f} {'-':>12} {'-':>8}")
                continue
            cy_ms = best_ms(lambda: call(_cy), args.repeats)
            print(f"{name:<26} {n:>7} {py_ms:>10.3f} {cy_ms:>12.3f} {py_ms / cy_ms:>7.1f}x")


if __name__ == "__main__":
    main()
