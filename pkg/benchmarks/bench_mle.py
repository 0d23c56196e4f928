"""Benchmark the likelihood-maximization kernel: numba vs pure numpy.

The reweighted-sandwich iteration is the package's one hot loop; everything
else is vectorized numpy already.  This script times full reconstructions on
the same sampled records under both backends (after a warmup pass so numba's
compile time is not counted) and prints the per-call cost and speedup.

Run:  python3 benchmarks/bench_mle.py [--iters 20000] [--repeats 5]
"""

import argparse
import os
import time

import numpy as np

from photon_duality import derive_seed, random_two_path_state, to_density_matrix
from photon_duality._kernels import BACKEND_ENV, available_backends
from photon_duality.tomography import NONTRIVIAL_SETTINGS, mle_reconstruct, sample_counts


def make_records(seed: int, shots: int = 100_000):
    state = random_two_path_state(np.random.default_rng(seed))
    rho = to_density_matrix(state)
    return [
        sample_counts(rho, m, shots, derive_seed(seed, k))
        for k, m in enumerate(NONTRIVIAL_SETTINGS)
    ]


def time_backend(backend: str, records, max_iter: int, repeats: int) -> float:
    os.environ[BACKEND_ENV] = backend
    mle_reconstruct(records, max_iter=50, tol=0.0)  # warmup / JIT compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = mle_reconstruct(records, max_iter=max_iter, tol=0.0)
        best = min(best, time.perf_counter() - t0)
    assert result.iterations == max_iter
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=20_000, help="fixed iteration count per run")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (min is reported)")
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args()

    records = make_records(args.seed)
    previous = os.environ.get(BACKEND_ENV)
    timings = {}
    try:
        for backend in available_backends():
            timings[backend] = time_backend(backend, records, args.iters, args.repeats)
    finally:
        if previous is None:
            os.environ.pop(BACKEND_ENV, None)
        else:
            os.environ[BACKEND_ENV] = previous

    print(f"reweighted-sandwich kernel, {args.iters} iterations, best of {args.repeats}:")
    for backend, seconds in timings.items():
        print(f"  {backend:<6} {seconds * 1e3:8.1f} ms  ({seconds / args.iters * 1e6:6.2f} us/iter)")
    if "numba" in timings and "numpy" in timings:
        print(f"  speedup numpy/numba: {timings['numpy'] / timings['numba']:.1f}x")


if __name__ == "__main__":
    main()
