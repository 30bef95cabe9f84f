"""Compiled kernels vs the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from picardseq import _fallback

try:
    from picardseq import _kernels
except ImportError:
    _kernels = None


def rref_case(rng, n, p):
    a = rng.integers(0, p, size=(n, n), dtype=np.int64)
    return lambda mod: mod.rref_inplace(a.copy(), p)


def scan_case(rng, k, d, p):
    # strictly upper triangular matrices never combine to an invertible one, and
    # the identity sits at the slowest index, so the scan walks p^(k-1) candidates
    upper = [(i, j) for i in range(d) for j in range(i + 1, d)]
    basis = np.zeros((k, d, d), dtype=np.int64)
    basis[0] = np.eye(d, dtype=np.int64)
    for t in range(1, k):
        i, j = upper[(t - 1) % len(upper)]
        basis[t, i, j] = rng.integers(1, p)
    return lambda mod: mod.first_invertible(basis.copy(), p, 10_000_000)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    cases = [
        ("rref 16x16 mod 2", rref_case(rng, 16, 2)),
        ("rref 48x48 mod 3", rref_case(rng, 48, 3)),
        ("scan k=10 d=4 mod 2", scan_case(rng, 10, 4, 2)),
        ("scan k=8 d=6 mod 3", scan_case(rng, 8, 6, 3)),
    ]
    print(f"{'case':<24}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in cases:
        tp = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:<24}{tp:>14.2f}{'n/a':>14}{'':>10}")
            continue
        assert fn(_fallback) == fn(_kernels) or list(fn(_fallback)) == list(fn(_kernels))
        tc = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24}{tp:>14.2f}{tc:>14.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
