"""Boolean algebras of type I factors built from a tensor decomposition into sites.

Subsets of sites are bitmasks: bit ``i`` is site ``i``.  The factor of a mask
``A`` is the full matrix algebra on the legs in ``A`` tensored with scalars on
the rest, optionally conjugated by a global ``frame`` unitary.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CapacityError, ContractViolation
from .matcore import DEFAULT_CAP, DEFAULT_TOL, as_matrix, kron, span_deviation
from .vnalg import (AlgebraBasis, commutant, conjugate, is_factor, join_algebras,
                    meet_algebras, scalars)

MAX_SITES = 6
LAW_TOL = 1e-8


def popcount(mask):
    return bin(mask).count("1")


def mask_sites(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class SiteSpec:
    dims: tuple
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not 1 <= len(dims) <= MAX_SITES:
            raise CapacityError(f"need 1..{MAX_SITES} sites, got {len(dims)}")
        if any(d < 2 for d in dims):
            raise ContractViolation(f"every site needs dimension >= 2, got {dims}")
        if self.ambient_dim > self.cap:
            raise CapacityError(f"ambient dimension {self.ambient_dim} exceeds cap {self.cap}")

    @property
    def ambient_dim(self):
        return int(np.prod(self.dims))

    @property
    def n_sites(self):
        return len(self.dims)

    @property
    def leg_order(self):
        return tuple(range(len(self.dims)))


class FactorizationSpec:
    """The family ``A -> F_A`` over all subsets of sites.

    Factors are built on first use and cached by mask.  Cache fills are
    idempotent, so concurrent readers only risk duplicated work.
    """

    def __init__(self, sites, frame=None):
        if not isinstance(sites, SiteSpec):
            sites = SiteSpec(tuple(sites))
        self.sites = sites
        d = sites.ambient_dim
        if frame is not None:
            frame = as_matrix(frame)
            if frame.shape != (d, d):
                raise ContractViolation(f"frame must be {d}x{d}")
            if np.linalg.norm(frame.conj().T @ frame - np.eye(d), 2) > 1e-10:
                raise ContractViolation("frame is not unitary")
        self.frame = frame
        self._factors = {}
        self._perms = {}
        for mask in range(1 << sites.n_sites):
            order = mask_sites(mask) + mask_sites(self.full ^ mask)
            self._perms[mask] = _kernels.leg_permutation_index(sites.dims, order)

    @property
    def n_atoms(self):
        return self.sites.n_sites

    @property
    def ambient_dim(self):
        return self.sites.ambient_dim

    @property
    def full(self):
        return (1 << self.n_atoms) - 1

    @property
    def masks(self):
        return range(1 << self.n_atoms)

    @property
    def atoms(self):
        return [1 << i for i in range(self.n_atoms)]

    def complement(self, mask):
        return self.full ^ mask

    def leg_dim(self, mask):
        return int(np.prod([self.sites.dims[i] for i in mask_sites(mask)], dtype=np.int64))

    def leg_permutation(self, mask):
        """Permutation matrix taking natural leg order to (legs in mask, rest)."""
        idx = self._perms[mask]
        d = self.ambient_dim
        p = np.zeros((d, d))
        p[np.arange(d), idx] = 1.0
        return p

    def factor(self, mask):
        if mask < 0 or mask > self.full:
            raise ContractViolation(f"mask {mask} outside the index")
        x = self._factors.get(mask)
        if x is None:
            x = self._build_factor(mask)
            self._factors[mask] = x
        return x

    def _build_factor(self, mask):
        d = self.ambient_dim
        g = self.leg_dim(mask)
        r = d // g
        # matrix units on the grouped legs, identity on the rest, HS-normalized
        idx = self._perms[mask]
        inv = np.empty_like(idx)
        inv[idx] = np.arange(d)
        rest = np.eye(r) / np.sqrt(r)
        basis = np.zeros((g * g, d, d), dtype=np.complex128)
        for i in range(g):
            for j in range(g):
                unit = np.zeros((g, g))
                unit[i, j] = 1.0
                grouped = np.kron(unit, rest)
                basis[i * g + j] = grouped[np.ix_(inv, inv)]
        x = AlgebraBasis(d, basis)
        if self.frame is not None:
            x = conjugate(x, self.frame)
        return x

    def __repr__(self):
        framed = ", framed" if self.frame is not None else ""
        return f"FactorizationSpec(sites={self.sites.dims}{framed})"


def from_sites(dims, frame=None):
    return FactorizationSpec(SiteSpec(tuple(dims)), frame=frame)


def product_factorization(f1, f2):
    dims = f1.sites.dims + f2.sites.dims
    sites = SiteSpec(dims, cap=min(f1.sites.cap, f2.sites.cap))
    if f1.frame is None and f2.frame is None:
        return FactorizationSpec(sites)
    a = f1.frame if f1.frame is not None else np.eye(f1.ambient_dim)
    b = f2.frame if f2.frame is not None else np.eye(f2.ambient_dim)
    return FactorizationSpec(sites, frame=kron(a, b, cap=sites.cap))


def build_from_product_probability(outcome_probs):
    """Factorization of L^2 of a finite product probability, with unit 1.

    In the basis ``indicator(w) / sqrt(p(w))`` of each site the constant
    function is ``(sqrt(p(w)))_w``; the unit is the tensor product of these.
    """
    units = []
    for probs in outcome_probs:
        p = np.asarray(probs, dtype=np.float64)
        if p.ndim != 1 or p.size < 2:
            raise ContractViolation("each site needs at least two outcomes")
        if np.any(~np.isfinite(p)) or np.any(p <= 0):
            raise ContractViolation("outcome probabilities must be strictly positive")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ContractViolation("outcome probabilities must sum to 1")
        units.append(np.sqrt(p))
    spec = from_sites([len(u) for u in units])
    omega = np.ones(1)
    for u in units:
        omega = np.kron(omega, u)
    return spec, omega.astype(np.complex128).reshape(-1, 1)


@dataclass
class FactorizationReport:
    laws: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    law_tol: float = LAW_TOL

    def record(self, law, dev, where=None):
        self.laws[law] = max(self.laws.get(law, 0.0), float(dev))
        if dev > self.law_tol and where is not None:
            self.failures.append(f"{law} at {where}")

    @property
    def passed(self):
        return {k: v <= self.law_tol for k, v in self.laws.items()}

    @property
    def ok(self):
        return all(self.passed.values())


def _center_deviation(x, tol):
    cert = is_factor(x, tol)
    return 0.0 if cert.is_factor else 1.0


def verify_factorization(f, tol=DEFAULT_TOL, law_tol=LAW_TOL, seed=0xF0CC):
    """Check the factorization axioms, reporting the worst deviation per law.

    ``f`` is a ``FactorizationSpec`` or a plain list of ``AlgebraBasis``
    (closed family checked without an index).
    """
    if not isinstance(f, FactorizationSpec):
        return _verify_family(list(f), tol, law_tol)
    rep = FactorizationReport(law_tol=law_tol)
    masks = list(f.masks)
    comm = {}
    for a in masks:
        x = f.factor(a)
        rep.record("factor", _center_deviation(x, tol), a)
        comm[a] = commutant(x, tol)
        rep.record("complement", span_deviation(comm[a].columns, f.factor(f.complement(a)).columns), a)
    rep.record("bottom", span_deviation(f.factor(0).columns, scalars(f.ambient_dim).columns), 0)
    rep.record("top", 0.0 if f.factor(f.full).dim == f.ambient_dim ** 2 else 1.0, f.full)

    meets, joins = {}, {}

    def meet(a, b):
        key = (min(a, b), max(a, b))
        if key not in meets:
            meets[key] = meet_algebras(f.factor(a), f.factor(b), tol)
        return meets[key]

    def join(a, b):
        key = (min(a, b), max(a, b))
        if key not in joins:
            joins[key] = join_algebras(f.factor(a), f.factor(b), tol)
        return joins[key]

    for a, b in itertools.combinations_with_replacement(masks, 2):
        rep.record("meet", span_deviation(meet(a, b).columns, f.factor(a & b).columns), (a, b))
        rep.record("join", span_deviation(join(a, b).columns, f.factor(a | b).columns), (a, b))

    if len(masks) <= 16:
        triples = [(a, b, c) for a in masks for b, c in
                   itertools.combinations_with_replacement(masks, 2)]
    else:
        rng = np.random.default_rng(seed)
        triples = [tuple(int(v) for v in rng.integers(0, len(masks), 3)) for _ in range(50)]
    for a, b, c in triples:
        lhs = meet_algebras(f.factor(a), join(b, c), tol)
        rhs = join_algebras(meet(a, b), meet(a, c), tol)
        rep.record("distributivity", span_deviation(lhs.columns, rhs.columns), (a, b, c))
    return rep


def _find_in_family(family, z):
    return min(span_deviation(z.columns, y.columns) for y in family)


def _verify_family(family, tol, law_tol):
    rep = FactorizationReport(law_tol=law_tol)
    if not family:
        raise ContractViolation("empty family")
    for i, x in enumerate(family):
        rep.record("factor", _center_deviation(x, tol), i)
        rep.record("complement", _find_in_family(family, commutant(x, tol)), i)
    for i, j in itertools.combinations_with_replacement(range(len(family)), 2):
        m = meet_algebras(family[i], family[j], tol)
        jn = join_algebras(family[i], family[j], tol)
        rep.record("meet", _find_in_family(family, m), (i, j))
        rep.record("join", _find_in_family(family, jn), (i, j))
    for i, j, k in itertools.product(range(len(family)), repeat=3):
        x, y, z = family[i], family[j], family[k]
        lhs = meet_algebras(x, join_algebras(y, z, tol), tol)
        rhs = join_algebras(meet_algebras(x, y, tol), meet_algebras(x, z, tol), tol)
        rep.record("distributivity", span_deviation(lhs.columns, rhs.columns), (i, j, k))
    return rep
