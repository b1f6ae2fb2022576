import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from factorizations import _kernels as k

arrays01 = st.lists(st.floats(0, 1, allow_nan=False), min_size=0, max_size=12)


def brute_pmf(q):
    n = len(q)
    pmf = np.zeros(n + 1)
    for incl in itertools.product((0, 1), repeat=n):
        p = 1.0
        for i, b in enumerate(incl):
            p *= (1 - q[i]) if b else q[i]
        pmf[sum(incl)] += p
    return pmf


@given(arrays01)
@settings(max_examples=60, deadline=None)
def test_pmf_backends_agree(q):
    q = np.array(q)
    a = k.poisson_binomial_pmf_numpy(1 - q, q)
    b = k.poisson_binomial_pmf_jit(1 - q, q)
    assert np.allclose(a, b, atol=1e-14)


def test_pmf_matches_enumeration():
    q = np.array([0.1, 0.5, 0.25, 0.9, 0.7, 0.3])
    assert np.allclose(k.poisson_binomial_pmf(1 - q, q), brute_pmf(q), atol=1e-15)


def test_dyadic_product_backends(rng):
    cum = np.cumsum(np.r_[0, rng.standard_normal(16) + 1j * rng.standard_normal(16)])
    cells = np.array([0, 3, 3, 15])
    vals = rng.standard_normal(4) + 0j
    a = k.dyadic_product_numpy(cum, cells, vals)
    b = complex(k.dyadic_product_jit(cum, cells, vals))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@given(st.lists(st.floats(0, 5, allow_nan=False), min_size=1, max_size=20))
@settings(max_examples=60, deadline=None)
def test_remainder_backends(x):
    x = np.array([x])
    la, ra = k.remainder_sides_numpy(x)
    lb, rb = k.remainder_sides_jit(x)
    assert np.allclose(la, lb, rtol=1e-12, atol=1e-12)
    assert np.allclose(ra, rb, rtol=1e-12, atol=1e-12)


def test_cluster_backends():
    v = np.array([0.0, 1e-12, 0.5, 0.5 + 1e-11, 1.0])
    a = k.cluster_sorted_numpy(v, 1e-9)
    b = k.cluster_sorted_jit(v, 1e-9)
    assert list(a) == list(b)


@pytest.mark.parametrize("dims,order", [((2, 3), (1, 0)), ((2, 2, 3), (2, 0, 1)),
                                        ((3, 2, 2), (0, 2, 1))])
def test_leg_permutation_backends_and_transpose_oracle(dims, order):
    a = k.leg_permutation_index_numpy(np.array(dims), np.array(order))
    b = k.leg_permutation_index_jit(np.array(dims), np.array(order))
    assert list(a) == list(b)
    v = np.arange(int(np.prod(dims)))
    assert list(v[a]) == list(v.reshape(dims).transpose(order).reshape(-1))


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, FACTORIZATIONS_DISABLE_NUMBA="1")
    code = ("from factorizations import _kernels as k, lemmas;"
            "print(k.USE_NUMBA, lemmas.dominance_check([0.1, 0.9])[0])")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out == ["False", "True"]
