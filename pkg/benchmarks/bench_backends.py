"""Benchmark the numba kernels against the pure-numpy fallback.

Both backends consume identical random blocks, so besides timing them this
script checks that the outputs match bit for bit. Run from the repo root:

    python3 benchmarks/bench_backends.py --reps 50000
"""

import argparse
import os
import time

import numpy as np

from kproc import KParams, SeedSpec, sample_gamma
from kproc.backend import HAS_NUMBA
from kproc.kernels import run_entrance, run_to_target


def bench_covering(env, reps, seed):
    rng = SeedSpec(seed).generator()
    targets = rng.standard_exponential(reps)
    t0 = time.perf_counter()
    out = run_to_target(env.weights, 0.0, targets, 0, rng)
    return time.perf_counter() - t0, out


def bench_entrance(env, reps, seed):
    in_a = np.zeros(env.n + 1, dtype=np.bool_)
    in_a[1:21] = True
    rng = SeedSpec(seed).generator()
    t0 = time.perf_counter()
    out = run_entrance(env.weights, 0.0, in_a, 0, reps, rng)
    return time.perf_counter() - t0, out


WORKLOADS = [("covering", bench_covering), ("entrance", bench_entrance)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=50_000)
    ap.add_argument("--terms", type=int, default=2_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    if not HAS_NUMBA:
        print("numba not importable; only the numpy backend will run")

    env = sample_gamma(0.5, args.terms, SeedSpec(args.seed))
    backends = ["numba", "numpy"] if HAS_NUMBA else ["numpy"]
    results = {}
    for backend in backends:
        os.environ["KPROC_BACKEND"] = backend
        for name, fn in WORKLOADS:
            fn(env, 1000, args.seed)  # warm up (JIT compile on the numba side)
            best, out = min(
                (fn(env, args.reps, args.seed) for _ in range(args.repeat)),
                key=lambda pair: pair[0])
            results[backend, name] = out
            rate = args.reps / best
            print(f"{backend:6s} {name:9s} {best * 1e3:9.2f} ms  {rate:12.0f} replicas/s")
    os.environ.pop("KPROC_BACKEND", None)

    if len(backends) == 2:
        for name, _ in WORKLOADS:
            a = results["numba", name]
            b = results["numpy", name]
            same = all(np.array_equal(x, y) for x, y in zip(a, b))
            print(f"{name}: outputs {'bit-identical' if same else 'DIFFER'} across backends")


if __name__ == "__main__":
    main()
