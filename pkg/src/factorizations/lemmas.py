"""Numeric lemmas: products over dyadic partitions, a remainder bound,
Poisson-binomial dominance and the classicality limit."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import CapacityError, ContractViolation

log = logging.getLogger(__name__)

NUDGE = 2.0 ** -40


@dataclass(frozen=True)
class DiscreteComplexMeasure:
    """Atoms at ``ground`` plus a piecewise-constant density on a uniform grid of [0, 1]."""

    ground: tuple = ()
    atom_values: tuple = ()
    density: Optional[tuple] = None

    def __post_init__(self):
        g = tuple(float(x) for x in self.ground)
        a = tuple(complex(v) for v in self.atom_values)
        object.__setattr__(self, "ground", g)
        object.__setattr__(self, "atom_values", a)
        if len(g) != len(a):
            raise ContractViolation("one value per atom location")
        if any(not 0.0 <= x <= 1.0 for x in g):
            raise ContractViolation("atom locations must lie in [0, 1]")
        if any(y <= x for x, y in zip(g, g[1:])):
            raise ContractViolation("atom locations must be strictly increasing")
        if self.density is not None:
            dens = tuple(complex(v) for v in self.density)
            if not dens:
                raise ContractViolation("density grid is empty")
            object.__setattr__(self, "density", dens)
        vals = list(a) + list(self.density or ())
        if not all(np.isfinite(v) for v in vals):
            raise ContractViolation("measure values must be finite")

    def total_variation(self):
        tv = sum(abs(v) for v in self.atom_values)
        if self.density is not None:
            tv += sum(abs(v) for v in self.density) / len(self.density)
        return float(tv)

    def density_integral(self):
        if self.density is None:
            return 0.0j
        return complex(np.mean(self.density))

    def cumulative(self, points):
        """``t -> integral of the density over [0, t]``, exact for a step density."""
        points = np.asarray(points, dtype=np.float64)
        if self.density is None:
            return np.zeros(points.shape, dtype=np.complex128)
        dens = np.asarray(self.density)
        grid = np.linspace(0.0, 1.0, dens.size + 1)
        cum = np.concatenate(([0.0], np.cumsum(dens) / dens.size))
        return np.interp(points, grid, cum.real) + 1j * np.interp(points, grid, cum.imag)


def _atom_locations(nu, max_depth):
    locs = np.array(nu.ground, dtype=np.float64)
    scale = 2.0 ** max_depth
    for i, x in enumerate(locs):
        if 0.0 < x < 1.0 and float(x * scale).is_integer():
            log.info("atom at %r sits on a dyadic boundary; nudged by 2**-40", x)
            locs[i] = x + NUDGE
    return locs


def dissecting_product_limit(nu, max_depth):
    """Products of ``1 + nu(cell)`` over dyadic partitions of depths 1..max_depth.

    Returns ``(products, rhs)`` with ``rhs = exp(nu(continuous part)) *
    prod over atoms of (1 + nu({x}))``.
    """
    max_depth = int(max_depth)
    if not 1 <= max_depth <= 22:
        raise ContractViolation("max_depth must lie in 1..22")
    locs = _atom_locations(nu, max_depth)
    values = np.array(nu.atom_values, dtype=np.complex128)
    rhs = complex(np.exp(nu.density_integral()) * np.prod(1.0 + values))
    products = []
    for depth in range(1, max_depth + 1):
        n = 1 << depth
        bounds = np.arange(n + 1) / n
        cum = nu.cumulative(bounds)
        cells = np.minimum(np.floor(locs * n).astype(np.int64), n - 1)
        products.append(_kernels.dyadic_product(cum, cells, values))
    return products, rhs


def remainder_inequality_check(x):
    """``prod(1 + x) - 1 - sum(x) <= (sum(x) - max(x)) * sum(x) * exp(sum(x))``."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size == 0 or x.size > 20:
        raise ContractViolation("need 1..20 entries")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ContractViolation("entries must be finite and non-negative")
    lhs, rhs = _kernels.remainder_sides(x.reshape(1, -1))
    lhs, rhs = float(lhs[0]), float(rhs[0])
    return lhs, rhs, lhs <= rhs + 1e-12 * (1.0 + rhs)


def remainder_inequality_batch(rows):
    """Vectorized form over the rows of a zero-padded array."""
    rows = np.asarray(rows, dtype=np.float64)
    lhs, rhs = _kernels.remainder_sides(rows)
    return lhs, rhs, lhs <= rhs + 1e-12 * (1.0 + rhs)


def _check_q(q):
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if q.size > 64:
        raise CapacityError("at most 64 exclusion probabilities")
    if np.any(~np.isfinite(q)) or np.any(q < 0) or np.any(q > 1):
        raise ContractViolation("exclusion probabilities must lie in [0, 1]")
    return q


def poisson_binomial_pmf(q):
    """Law of the number of included indices, index ``i`` included w.p. ``1 - q_i``."""
    q = _check_q(q)
    return _kernels.poisson_binomial_pmf(1.0 - q, q)


def poisson_binomial_cdf(q):
    return np.cumsum(poisson_binomial_pmf(q))


def geometric_mean(q):
    q = _check_q(q)
    if q.size == 0:
        return 1.0
    if np.any(q == 0):
        return 0.0
    return float(np.exp(np.mean(np.log(q))))


def dominance_check(q):
    """``|Gamma| <= |Gamma~|`` stochastically, ``Gamma~`` excluding each index
    with the geometric mean of ``q``.  Returns ``(holds, (cdf, cdf_tilde))``."""
    q = _check_q(q)
    cdf = poisson_binomial_cdf(q)
    cdf_t = poisson_binomial_cdf(np.full(q.size, geometric_mean(q)))
    return bool(np.all(cdf >= cdf_t - 1e-12)), (cdf, cdf_t)


def classicality_limit(p0, m, k):
    """``(exact_k, limit)`` for the binomial sum and its Poisson-type limit.

    ``exact_k = sum_{l<=m} C(k,l) (1-p0^(1/k))^l p0^((k-l)/k)`` and
    ``limit = p0 * sum_{l<=m} (-log p0)^l / l!``.
    """
    p0 = float(p0)
    m, k = int(m), int(k)
    if not 0.0 < p0 <= 1.0:
        raise ContractViolation("p0 must lie in (0, 1]")
    if m < 0 or not 1 <= k <= 10 ** 6:
        raise ContractViolation("need m >= 0 and 1 <= k <= 10**6")
    lp = math.log(p0)
    log_miss = math.log(-math.expm1(lp / k)) if p0 < 1.0 else -math.inf
    terms = []
    for l in range(min(m, k) + 1):
        if l and log_miss == -math.inf:
            break
        lt = (math.lgamma(k + 1) - math.lgamma(l + 1) - math.lgamma(k - l + 1)
              + (k - l) / k * lp)
        if l:
            lt += l * log_miss
        terms.append(math.exp(lt))
    exact = math.fsum(terms)
    if p0 == 1.0:
        return exact, 1.0
    la = math.log(-lp)
    limit = p0 * math.fsum(math.exp(l * la - math.lgamma(l + 1)) for l in range(m + 1))
    return exact, limit
