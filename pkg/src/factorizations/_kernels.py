"""Inner loops with a numba path and a pure-numpy path.

The JIT path is used unless ``FACTORIZATIONS_DISABLE_NUMBA`` is set to a
truthy value (or numba is not importable).  Both implementations are always
importable under ``*_numpy`` / ``*_jit`` names so tests and the benchmark can
compare them directly; the unsuffixed names are the selected backend.
"""

import os

import numpy as np

_DISABLE = os.environ.get("FACTORIZATIONS_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on")

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not _DISABLE


# ---------------------------------------------------------------------------
# Poisson-binomial pmf by sequential convolution
# ---------------------------------------------------------------------------

def poisson_binomial_pmf_numpy(incl, excl):
    pmf = np.zeros(len(incl) + 1)
    pmf[0] = 1.0
    for i in range(len(incl)):
        nxt = np.zeros_like(pmf)
        nxt[: i + 1] = pmf[: i + 1] * excl[i]
        nxt[1: i + 2] += pmf[: i + 1] * incl[i]
        pmf = nxt
    return pmf


def _poisson_binomial_pmf_py(incl, excl):
    n = incl.shape[0]
    pmf = np.zeros(n + 1)
    pmf[0] = 1.0
    for i in range(n):
        # descending k keeps pmf[k - 1] at its previous-step value
        for k in range(i + 1, 0, -1):
            pmf[k] = pmf[k] * excl[i] + pmf[k - 1] * incl[i]
        pmf[0] = pmf[0] * excl[i]
    return pmf


# ---------------------------------------------------------------------------
# Product over dyadic cells of (1 + nu(cell))
# ---------------------------------------------------------------------------

def dyadic_product_numpy(cum, atom_cells, atom_values):
    masses = np.diff(cum).astype(np.complex128)
    np.add.at(masses, atom_cells, atom_values)
    return complex(np.prod(1.0 + masses))


def _dyadic_product_py(cum, atom_cells, atom_values):
    ncell = cum.shape[0] - 1
    masses = np.empty(ncell, dtype=np.complex128)
    for k in range(ncell):
        masses[k] = cum[k + 1] - cum[k]
    for j in range(atom_cells.shape[0]):
        masses[atom_cells[j]] += atom_values[j]
    out = 1.0 + 0.0j
    for k in range(ncell):
        out *= 1.0 + masses[k]
    return out


# ---------------------------------------------------------------------------
# Both sides of the remainder inequality, batched over rows
# ---------------------------------------------------------------------------

def remainder_sides_numpy(x):
    # zero padding is exact: it changes neither side
    s = x.sum(axis=1)
    lhs = np.prod(1.0 + x, axis=1) - 1.0 - s
    rhs = (s - x.max(axis=1)) * s * np.exp(s)
    return lhs, rhs


def _remainder_sides_py(x):
    m, n = x.shape
    lhs = np.empty(m)
    rhs = np.empty(m)
    for r in range(m):
        s = 0.0
        p = 1.0
        big = 0.0
        for i in range(n):
            v = x[r, i]
            s += v
            p *= 1.0 + v
            if v > big:
                big = v
        lhs[r] = p - 1.0 - s
        rhs[r] = (s - big) * s * np.exp(s)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Greedy clustering of sorted values
# ---------------------------------------------------------------------------

def cluster_sorted_numpy(values, gap):
    if values.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    breaks = np.diff(values) > gap
    return np.concatenate(([0], np.cumsum(breaks))).astype(np.int64)


def _cluster_sorted_py(values, gap):
    n = values.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    c = 0
    for i in range(1, n):
        if values[i] - values[i - 1] > gap:
            c += 1
        labels[i] = c
    return labels


# ---------------------------------------------------------------------------
# Index map for permuting tensor legs
# ---------------------------------------------------------------------------

def leg_permutation_index_numpy(dims, order):
    """``out[i] = j`` such that the leg-reordered vector is ``v[out]``.

    The reordered vector stores the legs in the sequence ``order``; ``v`` is
    in natural leg order.
    """
    n = len(dims)
    idx = np.arange(int(np.prod(dims))).reshape(tuple(dims))
    return np.transpose(idx, tuple(order)).reshape(-1).astype(np.int64)


def _leg_permutation_index_py(dims, order):
    n = dims.shape[0]
    total = 1
    for k in range(n):
        total *= dims[k]
    strides = np.empty(n, dtype=np.int64)
    acc = 1
    for k in range(n - 1, -1, -1):
        strides[k] = acc
        acc *= dims[k]
    out = np.empty(total, dtype=np.int64)
    digits = np.zeros(n, dtype=np.int64)
    for i in range(total):
        j = 0
        for k in range(n):
            j += digits[k] * strides[order[k]]
        out[i] = j
        # odometer over the reordered legs, last leg fastest
        for k in range(n - 1, -1, -1):
            digits[k] += 1
            if digits[k] < dims[order[k]]:
                break
            digits[k] = 0
    return out


if NUMBA_AVAILABLE:
    poisson_binomial_pmf_jit = njit(cache=True)(_poisson_binomial_pmf_py)
    dyadic_product_jit = njit(cache=True)(_dyadic_product_py)
    remainder_sides_jit = njit(cache=True)(_remainder_sides_py)
    cluster_sorted_jit = njit(cache=True)(_cluster_sorted_py)
    leg_permutation_index_jit = njit(cache=True)(_leg_permutation_index_py)
else:  # pragma: no cover
    poisson_binomial_pmf_jit = _poisson_binomial_pmf_py
    dyadic_product_jit = _dyadic_product_py
    remainder_sides_jit = _remainder_sides_py
    cluster_sorted_jit = _cluster_sorted_py
    leg_permutation_index_jit = _leg_permutation_index_py


def poisson_binomial_pmf(incl, excl):
    incl = np.ascontiguousarray(incl, dtype=np.float64)
    excl = np.ascontiguousarray(excl, dtype=np.float64)
    if USE_NUMBA:
        return poisson_binomial_pmf_jit(incl, excl)
    return poisson_binomial_pmf_numpy(incl, excl)


def dyadic_product(cum, atom_cells, atom_values):
    cum = np.ascontiguousarray(cum, dtype=np.complex128)
    atom_cells = np.ascontiguousarray(atom_cells, dtype=np.int64)
    atom_values = np.ascontiguousarray(atom_values, dtype=np.complex128)
    if USE_NUMBA:
        return complex(dyadic_product_jit(cum, atom_cells, atom_values))
    return dyadic_product_numpy(cum, atom_cells, atom_values)


def remainder_sides(x):
    x = np.ascontiguousarray(np.atleast_2d(x), dtype=np.float64)
    if USE_NUMBA:
        return remainder_sides_jit(x)
    return remainder_sides_numpy(x)


def cluster_sorted(values, gap):
    values = np.ascontiguousarray(values, dtype=np.float64)
    if USE_NUMBA:
        return cluster_sorted_jit(values, float(gap))
    return cluster_sorted_numpy(values, gap)


def leg_permutation_index(dims, order):
    dims = np.ascontiguousarray(dims, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    if USE_NUMBA:
        return leg_permutation_index_jit(dims, order)
    return leg_permutation_index_numpy(dims, order)
