"""Benchmark the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 8192] [--dim 512] [--tau 16]
"""

import argparse
import time

import numpy as np

from seco import kernels
from seco.compress import CompressionConfig, compress, num_compressed_tokens
from seco.kernels import python_impl
from seco.tensor import HiddenStates, make_rng


def timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=8192)
    parser.add_argument("--dim", type=int, default=512)
    parser.add_argument("--tau", type=int, default=16)
    args = parser.parse_args()

    rng = make_rng(0)
    ctx = rng.standard_normal((args.n, args.dim)).astype(np.float32)
    qbar = rng.standard_normal(args.dim)
    k = num_compressed_tokens(args.n, args.tau)
    centers = ctx[:k]
    groups = rng.integers(0, k, size=args.n)
    groups[:k] = np.arange(k)
    w = rng.standard_normal(args.n)

    if kernels.BACKEND != "cython":
        print("compiled extension not available; benchmarking fallback only")
    impls = [("numpy", python_impl)]
    if kernels.BACKEND == "cython":
        impls.append(("cython", kernels))

    print(f"n={args.n} dim={args.dim} k={k} (active backend: {kernels.BACKEND})")
    print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name, _ in impls))
    rows = [
        ("relevance", lambda impl: impl.relevance_kernel(ctx, qbar)),
        ("assignment cos", lambda impl: impl.cosine_matrix(ctx, centers)),
        ("merge", lambda impl: impl.merge_kernel(ctx, groups, w, k)),
    ]
    for name, call in rows:
        times = [timeit(lambda impl=impl: call(impl)) for _, impl in impls]
        print(f"{name:<18}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times))

    h = HiddenStates(context=ctx, query=rng.standard_normal((8, args.dim)))
    t = timeit(lambda: compress(h, CompressionConfig(tau=args.tau)), repeats=3)
    print(f"\nfull compress ({kernels.BACKEND} backend): {t * 1e3:.2f}ms")


if __name__ == "__main__":
    main()
