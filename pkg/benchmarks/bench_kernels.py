"""Time the numba kernels against their pure-numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from factorizations import _kernels as k


def cases(rng):
    q = rng.uniform(0, 1, 12)
    n = 1 << 16
    cum = np.cumsum(np.r_[0, rng.standard_normal(n)]).astype(np.complex128)
    cells = rng.integers(0, n, 8)
    vals = (rng.standard_normal(8) + 1j * rng.standard_normal(8)).astype(np.complex128)
    rows = rng.uniform(0, 3, (10 ** 4, 20))
    eig = np.sort(rng.uniform(0, 1, 2000))
    dims, order = np.array([2, 3, 2, 3, 2]), np.array([4, 1, 0, 3, 2])
    return {
        "poisson_binomial_pmf": ((1 - q, q), k.poisson_binomial_pmf_numpy, k.poisson_binomial_pmf_jit),
        "dyadic_product": ((cum, cells, vals), k.dyadic_product_numpy, k.dyadic_product_jit),
        "remainder_sides": ((rows,), k.remainder_sides_numpy, k.remainder_sides_jit),
        "cluster_sorted": ((eig, 1e-4), k.cluster_sorted_numpy, k.cluster_sorted_jit),
        "leg_permutation_index": ((dims, order), k.leg_permutation_index_numpy,
                                  k.leg_permutation_index_jit),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}{'numpy (us)':>12}{'numba (us)':>12}{'speedup':>9}")
    for name, (a, f_np, f_jit) in cases(rng).items():
        f_jit(*a)  # compile outside the timing
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat))
        t_jit = min(timeit.repeat(lambda: f_jit(*a), number=1, repeat=args.repeat))
        print(f"{name:<24}{t_np * 1e6:>12.1f}{t_jit * 1e6:>12.1f}{t_np / t_jit:>9.1f}")


if __name__ == "__main__":
    main()
