"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 20]
"""

import argparse
import timeit

import numpy as np
from scipy.stats import unitary_group

from dfs_photonics import kernels
from dfs_photonics.fock import _pairs


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--rows", type=int, default=200_000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    U = unitary_group.rvs(8, random_state=rng)
    pairs = _pairs()
    probs = rng.random((args.rows, 16))
    u = rng.random(args.rows)

    # compile outside the timed region
    kernels.two_photon_transfer_jit(U, pairs)
    kernels.sample_rows_jit(probs[:10], u[:10])

    cases = [
        ("two_photon_transfer (36x36)", lambda: kernels.two_photon_transfer_numpy(U, pairs),
         lambda: kernels.two_photon_transfer_jit(U, pairs), 200),
        (f"sample_rows ({args.rows} x 16)", lambda: kernels.sample_rows_numpy(probs, u),
         lambda: kernels.sample_rows_jit(probs, u), 1),
    ]
    print(f"{'kernel':32s} {'numpy':>12s} {'numba':>12s} {'speedup':>8s}")
    for name, f_np, f_jit, number in cases:
        a = best_of(f_np, args.repeat, number)
        b = best_of(f_jit, args.repeat, number)
        print(f"{name:32s} {a * 1e6:10.1f}us {b * 1e6:10.1f}us {a / b:7.1f}x")


if __name__ == "__main__":
    main()
