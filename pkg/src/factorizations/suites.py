"""Invariant suites shared by the CLI and the acceptance tests.

Every suite returns a list of checks ``{"law", "max_deviation", "tolerance",
"pass"}``.  Law names follow the identities they test.  Label-level laws are
exact and carry tolerance 0.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import lemmas
from .errors import FactorizationError
from .factorization import from_sites, popcount, verify_factorization
from .fock import (build_dfock, bracket_permutation, classify_to_fock, exp_inner_product,
                   exp_map, exponential_vector, first_chaos_defect, random_first_chaos)
from .matcore import (DEFAULT_TOL, as_vector, haar_unitary, kron_all, matrix_from_json,
                      matrix_to_json, random_unit_vector, span_deviation)
from .spectrum import (SpectralProbability, counting_map, is_spectral_independence_probability,
                       measure_as_probability, spectral_projection, spectral_resolution,
                       spectral_set, vector_measure)
from .unital import (UnitalSpec, additive_space, find_factorizable_vector, is_additive,
                     is_factorizable, is_multiplicative, local_split, partition_split)
from .vnalg import (commutant, from_columns, generate_algebra, join_algebras, meet_algebras,
                    same_span)

SUITES = ("algebra", "factorization", "unital", "spectrum", "fock", "lemmas")
STANDARD_SITES = ((2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 3))
UNIT_MODES = ("product", "random_multiplicative", "explicit", "discover")


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

@dataclass
class Instance:
    sites: tuple
    unit_mode: str = "product"
    unit: Optional[np.ndarray] = None
    conjugate_seed: Optional[int] = None
    seed: int = 0

    def to_json(self):
        out = {"sites": list(self.sites), "unit_mode": self.unit_mode,
               "conjugate_seed": self.conjugate_seed, "seed": int(self.seed)}
        if self.unit is not None:
            out["unit"] = matrix_to_json(as_vector(self.unit).reshape(-1, 1))
        return out

    @classmethod
    def from_json(cls, obj):
        from .errors import ContractViolation
        try:
            sites = tuple(int(d) for d in obj["sites"])
            mode = obj.get("unit_mode", "product")
            seed = int(obj.get("seed", 0))
            cs = obj.get("conjugate_seed")
            cs = None if cs is None else int(cs)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ContractViolation(f"malformed instance: {exc}") from None
        if mode not in UNIT_MODES:
            raise ContractViolation(f"unknown unit_mode {mode!r}")
        unit = obj.get("unit")
        if unit is not None:
            unit = matrix_from_json(unit).reshape(-1)
        if mode == "explicit" and unit is None:
            raise ContractViolation("explicit unit_mode needs a unit")
        return cls(sites, mode, unit, cs, seed)


def product_unit(dims, rng):
    return kron_all([random_unit_vector(d, rng).reshape(-1, 1) for d in dims]).reshape(-1)


def random_multiplicative_unit(dims, rng):
    """Normalized ``(x)_p (omega_p + g_p)`` with ``g_p`` orthogonal to ``omega_p``."""
    legs = []
    for d in dims:
        w = random_unit_vector(d, rng)
        g = random_unit_vector(d, rng)
        g = g - w * np.vdot(w, g)
        legs.append((w + rng.uniform(0.2, 1.5) * g / np.linalg.norm(g)).reshape(-1, 1))
    v = kron_all(legs).reshape(-1)
    return v / np.linalg.norm(v)


def generate_instance(sites, seed=0, unit_mode="product", conjugate_seed=None):
    """An instance with its unit written out (``discover`` leaves it empty)."""
    inst = Instance(tuple(sites), unit_mode, None, conjugate_seed, int(seed))
    f = instance_factorization(inst)
    if unit_mode in ("product", "random_multiplicative"):
        inst.unit = _natural_unit(inst)
        if f.frame is not None:
            inst.unit = f.frame @ inst.unit
        UnitalSpec(f, inst.unit)
    return inst


def _natural_unit(inst):
    rng = np.random.default_rng(inst.seed)
    if inst.unit_mode == "random_multiplicative":
        return random_multiplicative_unit(inst.sites, rng)
    return product_unit(inst.sites, rng)


def instance_factorization(inst):
    frame = None
    if inst.conjugate_seed is not None:
        d = int(np.prod(inst.sites))
        frame = haar_unitary(d, np.random.default_rng(inst.conjugate_seed))
    return from_sites(inst.sites, frame=frame)


def standard_instances():
    out = []
    for k, dims in enumerate(STANDARD_SITES):
        out.append(generate_instance(dims, seed=7 + k))
        out.append(generate_instance(dims, seed=7 + k, unit_mode="random_multiplicative",
                                     conjugate_seed=1000 + k))
    return out


class Context:
    """Lazily built objects for one instance."""

    def __init__(self, inst, tol=DEFAULT_TOL):
        self.inst = inst
        self.tol = tol
        self.f = instance_factorization(inst)
        self._u = None
        self._r = None

    @property
    def unit(self):
        if self.inst.unit is not None:
            return as_vector(self.inst.unit)
        if self.inst.unit_mode == "discover":
            return find_factorizable_vector(self.f, seed=self.inst.seed, tol=self.tol).reshape(-1)
        v = _natural_unit(self.inst)
        return self.f.frame @ v if self.f.frame is not None else v

    @property
    def u(self):
        if self._u is None:
            self._u = UnitalSpec(self.f, self.unit, self.tol)
        return self._u

    @property
    def r(self):
        if self._r is None:
            self._r = spectral_resolution(self.u, self.tol)
        return self._r


# ---------------------------------------------------------------------------
# check bookkeeping
# ---------------------------------------------------------------------------

class Checks:
    def __init__(self, scale=1.0):
        self.scale = scale
        self.items = {}
        self.order = []

    def add(self, law, dev, tol):
        dev = float(dev)
        if law not in self.items:
            self.order.append(law)
            self.items[law] = [dev, tol * self.scale]
        else:
            self.items[law][0] = max(self.items[law][0], dev)

    def exact(self, law, ok):
        self.add(law, 0.0 if ok else 1.0, 0.0)

    def as_list(self):
        return [{"law": law, "max_deviation": self.items[law][0],
                 "tolerance": self.items[law][1],
                 "pass": bool(self.items[law][0] <= self.items[law][1])}
                for law in self.order]


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def random_structured_algebra(rng, max_dim=12):
    """Generators of ``V (sum_i M_{n_i} (x) 1_{m_i}) V*`` for a random block shape."""
    while True:
        d = int(rng.integers(2, max_dim + 1))
        shape, left = [], d
        while left > 0:
            n = int(rng.integers(1, min(left, 4) + 1))
            m = int(rng.integers(1, left // n + 1))
            shape.append((n, m))
            left -= n * m
        if len(shape) <= 4:
            break
    v = haar_unitary(d, rng)
    gens = []
    for _ in range(2):
        blocks = []
        for n, m in shape:
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            blocks.append(np.kron(a, np.eye(m)))
        g = np.zeros((d, d), dtype=np.complex128)
        off = 0
        for b in blocks:
            k = b.shape[0]
            g[off:off + k, off:off + k] = b
            off += k
        gens.append(v @ g @ v.conj().T)
    return d, gens, shape


def algebra_suite(ctx, scale=1.0, count=10, seed=None):
    chk = Checks(scale)
    rng = np.random.default_rng(ctx.inst.seed if seed is None else seed)
    for _ in range(count):
        d, gens, _ = random_structured_algebra(rng)
        x = generate_algebra(d, gens, ctx.tol)
        xcc = commutant(commutant(x, ctx.tol), ctx.tol)
        chk.add("double-commutant", same_span(x, xcc), 1e-8)
        _, gens2, _ = _same_dim_algebra(rng, d)
        y = generate_algebra(d, gens2, ctx.tol)
        lhs = commutant(join_algebras(x, y, ctx.tol), ctx.tol)
        rhs = meet_algebras(commutant(x, ctx.tol), commutant(y, ctx.tol), ctx.tol)
        chk.add("de-morgan", same_span(lhs, rhs), 1e-8)
    return chk.as_list()


def _same_dim_algebra(rng, d):
    while True:
        dd, gens, shape = random_structured_algebra(rng, max_dim=d)
        if dd == d:
            return dd, gens, shape


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

def factorization_suite(ctx, scale=1.0):
    chk = Checks(scale)
    rep = verify_factorization(ctx.f, ctx.tol)
    for law, dev in rep.laws.items():
        chk.add(law, dev, 1e-8)
    return chk.as_list()


# ---------------------------------------------------------------------------
# unital
# ---------------------------------------------------------------------------

def _random_element(x, rng):
    c = rng.standard_normal(x.dim) + 1j * rng.standard_normal(x.dim)
    return np.einsum("k,kij->ij", c, x.basis)


def _restriction(u, mask, y):
    """The algebra ``{Q* B Q : B in F_(y & mask)}`` on ``H_x``."""
    q = u.phi_basis(mask)
    m = q.shape[1]
    b = u.f.factor(y & mask).basis
    comp = np.einsum("ji,kjl,lm->kim", q.conj(), b, q).reshape(len(b), m * m).T
    from .matcore import orthonormal_columns
    return from_columns(m, orthonormal_columns(comp, u.tol, scale=1.0))


def unital_suite(ctx, scale=1.0, n_random=60):
    chk = Checks(scale)
    u, f = ctx.u, ctx.f
    chk.add("unit-certification", max(u.certificate.values()), 10 * ctx.tol.eq_tol)
    masks = list(f.masks)
    for x, y in itertools.product(masks, repeat=2):
        px, py = u.phi(x), u.phi(y)
        chk.add("phi-intersection", np.linalg.norm(px @ py - u.phi(x & y), 2), 1e-9)
        chk.add("phi-commutation", np.linalg.norm(px @ py - py @ px, 2), 1e-9)
        if x != y:
            gap = np.linalg.norm(px - py, 2)
            chk.add("phi-injectivity", max(0.0, 0.5 - gap), 0.0)
        if x & y == 0:
            chk.add("orthogonal", np.linalg.norm(px @ (py - u.phi(0)), 2), 1e-9)
    rng = np.random.default_rng(ctx.inst.seed + 1)
    om = u.omega
    atoms = f.atoms
    for _ in range(20):
        ops = [_random_element(f.factor(a), rng) for a in atoms]
        ops = [o / np.linalg.norm(o, 2) for o in ops]
        lhs = np.vdot(om, np.linalg.multi_dot(ops + [om.reshape(-1, 1)]).reshape(-1)) \
            if len(ops) > 1 else np.vdot(om, ops[0] @ om)
        rhs = np.prod([np.vdot(om, o @ om) for o in ops])
        chk.add("partition-product-rule", abs(lhs - rhs), 1e-9)
    mismatches = 0
    for v in _probe_vectors(ctx, rng, n_random):
        try:
            a = is_multiplicative(u, v, ctx.tol)
            nrm = np.linalg.norm(v)
            b = bool(nrm > 1e-12 and abs(np.vdot(om, v) - 1) <= 1e-8 * max(1, nrm)
                     and is_factorizable(v, f, ctx.tol).is_factorizable)
            mismatches += int(a != b)
        except FactorizationError:
            mismatches += 1
    chk.add("multiplicative-factorizable", mismatches, 0.0)
    dev = 0.0
    for x in masks:
        rx = {y: _restriction(u, x, y) for y in masks}
        for y, z in itertools.product(masks, repeat=2):
            dev = max(dev, same_span(meet_algebras(rx[y], rx[z], ctx.tol), rx[y & z]))
            dev = max(dev, same_span(join_algebras(rx[y], rx[z], ctx.tol), rx[y | z]))
        for y in masks:
            dev = max(dev, same_span(commutant(rx[y], ctx.tol), rx[f.complement(y)]))
    chk.add("restriction-homomorphism", dev, 1e-8)
    return chk.as_list()


def _probe_vectors(ctx, rng, n_random):
    """Random vectors, scaled units, and multiplicative vectors from first-chaos data."""
    u, r = ctx.u, ctx.r
    d = u.ambient_dim
    out = []
    for _ in range(n_random):
        out.append(random_unit_vector(d, rng) * rng.uniform(0.5, 2.0))
    for _ in range(10):
        g = random_first_chaos(r, rng, rng.uniform(0.1, 1.5))
        out.append(exp_map(u, r, g, ctx.tol, check=False).reshape(-1))
        out.append(2.0 * out[-1])
    out.append(u.omega.copy())
    return out


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def spectrum_suite(ctx, scale=1.0):
    chk = Checks(scale)
    u, r, f = ctx.u, ctx.r, ctx.f
    masks = list(f.masks)
    chk.exact("eigenspace-dimensions", sum(r.mu.values()) == f.ambient_dim)
    chk.exact("empty-point", r.mu.get(0) == 1)
    cols = np.hstack([r.eigenbasis[a] for a in r.labels])
    chk.add("eigenspace-orthogonality", np.linalg.norm(cols.conj().T @ cols - np.eye(f.ambient_dim), 2), 1e-8)
    sets = {x: set(spectral_set(r, x)) for x in masks}
    chk.exact("spectral-sets-pi-system",
              all(sets[x & y] == sets[x] & sets[y] for x in masks for y in masks))
    try:
        k = counting_map(r)
        chk.exact("counting-map", all(k[a] == popcount(a) for a in r.labels))
    except FactorizationError:
        chk.exact("counting-map", False)
    ok = True
    for x in masks:
        try:
            spectral_projection(r, x)
        except FactorizationError:
            ok = False
    chk.exact("projections-composition", ok)
    chk.exact("K-additivity", all(
        popcount(a) == sum(popcount(a & sum(1 << i for i in part)) for part in parts)
        for parts in set_partitions(range(f.n_atoms)) for a in r.labels))
    chk.exact("K-monotonicity", all(
        popcount(a & x) <= popcount(a & y) for a in r.labels for x in masks for y in masks
        if x & ~y == 0))
    chk.add("projections-and-subspaces", _subspace_product_deviation(u, r), 1e-8)
    rng = np.random.default_rng(ctx.inst.seed + 2)
    h, g = random_unit_vector(f.ambient_dim, rng), random_unit_vector(f.ambient_dim, rng)
    mu = vector_measure(r, h, g)
    chk.add("vector-measure-total", abs(sum(mu.values()) - np.vdot(h, g)), 1e-9)
    mu_om = vector_measure(r, u.omega, u.omega)
    chk.add("unit-measure", abs(mu_om[0] - 1.0) + sum(abs(v) for a, v in mu_om.items() if a), 1e-9)
    delta = SpectralProbability({0: 1.0})
    xi = exp_map(u, r, random_first_chaos(r, rng, 0.8), ctx.tol, check=False)
    nu = measure_as_probability(r, vector_measure(r, xi, xi))
    uniform = SpectralProbability({a: 1.0 / len(r.labels) for a in r.labels})
    no_empty = SpectralProbability({a: (1.0 / (len(r.labels) - 1) if a else 0.0) for a in r.labels})
    chk.exact("independence-probability",
              is_spectral_independence_probability(r, delta)
              and is_spectral_independence_probability(r, nu)
              and not is_spectral_independence_probability(r, no_empty)
              and (is_spectral_independence_probability(r, uniform) == _uniform_is_product(r)))
    return chk.as_list()


def _uniform_is_product(r):
    # the uniform law on the points is a product law iff every label set is
    # a full product of per-atom choices, which holds here (all 2^n labels)
    return len(r.labels) == 1 << r.n_atoms


def _subspace_product_deviation(u, r):
    """Events ``cap_p pr_p^{-1}(E_p)`` against tensor products of per-leg spans."""
    split = partition_split(u, tuple(u.f.atoms))
    n = r.n_atoms
    legs = []
    for p, q in enumerate(split.bases):
        empty = (q.conj().T @ u.omega).reshape(-1, 1)
        single = q.conj().T @ r.eigenbasis[1 << p]
        legs.append({0: empty, 1: single})
    dev = 0.0
    choices = [(0,), (1,), (0, 1)]
    for pick in itertools.product(choices, repeat=n):
        labels = [a for a in r.labels if all(((a >> p) & 1) in pick[p] for p in range(n))]
        if not labels:
            continue
        event = np.hstack([r.eigenbasis[a] for a in labels])
        per_leg = [np.hstack([legs[p][s] for s in pick[p]]) for p in range(n)]
        dev = max(dev, span_deviation(split.unitary @ event, kron_all(per_leg)))
    return dev


# ---------------------------------------------------------------------------
# fock
# ---------------------------------------------------------------------------

def fock_suite(ctx, scale=1.0, n_exp=50):
    chk = Checks(scale)
    u, r, f = ctx.u, ctx.r, ctx.f
    d = f.ambient_dim
    try:
        cls = classify_to_fock(u, r, ctx.tol, seed=ctx.inst.seed)
        chk.add("fock-conjugation", cls.deviations["conjugation"], 1e-7)
        chk.add("fock-unitary", max(cls.deviations["unitary"], cls.deviations["vacuum"],
                                    cls.deviations["exponential"]), 1e-8)
        chk.exact("fock-legs", list(cls.fock.leg_dims) == [r.mu[1 << p] for p in range(f.n_atoms)])
    except FactorizationError:
        chk.add("fock-conjugation", 1.0, 1e-7)
    rng = np.random.default_rng(ctx.inst.seed + 3)
    gs = [random_first_chaos(r, rng, rng.uniform(0.2, 1.5)) for _ in range(n_exp)]
    exps = [exp_map(u, r, g, ctx.tol, check=False) for g in gs]
    rank = np.linalg.matrix_rank(np.hstack(exps), tol=ctx.tol.rank_tol * 10)
    chk.add("multiplicative-totality", d - rank, 0.0)
    bad = 0
    for e in exps[:8]:
        bad += int(not is_multiplicative(u, e, ctx.tol))
    chk.add("exp-multiplicative", bad, 0.0)
    zero = exp_map(u, r, np.zeros(d), ctx.tol, check=False)
    chk.add("exp-zero", np.linalg.norm(zero.reshape(-1) - u.omega), 1e-9)
    dev = 0.0
    for g, e in zip(gs[:5], exps[:5]):
        for x in f.masks:
            lhs = u.phi(x) @ e
            rhs = exp_map(u, r, u.phi(x) @ g, ctx.tol, check=False)
            dev = max(dev, np.linalg.norm(lhs - rhs))
    chk.add("phi-compatibility", dev, 1e-8)
    dev = 0.0
    singles = [a for a in r.labels if popcount(a) == 1]
    for i in range(5):
        h, g = gs[i], gs[i + 5]
        mu = vector_measure(r, h, g)
        closed = np.prod([1.0 + mu[a] for a in singles])
        direct = np.vdot(exps[i], exps[i + 5])
        dev = max(dev, abs(closed - direct) / max(1.0, abs(closed)))
    chk.add("exp-inner-product", dev, 1e-8)
    chaos = np.hstack([r.eigenbasis[a] for a in singles])
    chk.add("first-chaos-additive", span_deviation(additive_space(u, ctx.tol), chaos), 1e-8)
    split = partition_split(u, tuple(f.atoms))
    per_leg = []
    for p, q in enumerate(split.bases):
        per_leg.append(np.hstack([(q.conj().T @ u.omega).reshape(-1, 1),
                                  q.conj().T @ r.eigenbasis[1 << p]]))
    prods = split.unitary.conj().T @ kron_all(per_leg)
    chk.add("products-total", d - np.linalg.matrix_rank(prods), 0.0)
    chk.exact("black-conditions", _black_conditions_all_fail(ctx, exps[0], chaos))
    chk.add("dfock-exp-inner-product", _dfock_check(rng), 1e-10)
    return chk.as_list()


def _black_conditions_all_fail(ctx, exp_vec, chaos):
    u, r = ctx.u, ctx.r
    only_unit = np.linalg.norm(exp_vec.reshape(-1) - u.omega) < 1e-8 or not is_multiplicative(u, exp_vec)
    only_zero = chaos.shape[1] == 0 or not is_additive(u, chaos[:, 0])
    nu = measure_as_probability(r, vector_measure(r, exp_vec, exp_vec))
    only_delta = abs(nu.weights[0] - 1.0) < 1e-12 or not is_spectral_independence_probability(r, nu)
    k_infinite = len(r.labels) == 1
    flags = [only_unit, only_zero, only_delta, k_infinite]
    return not any(flags)


def _dfock_check(rng):
    fs, _, _ = build_dfock((2, 1, 2), (2.0, 0.5, 1.3))
    perm = bracket_permutation(fs)
    dev = 0.0
    for _ in range(5):
        a = [random_unit_vector(k, rng) * rng.uniform(0, 1.5) for k in fs.leg_dims]
        b = [random_unit_vector(k, rng) * rng.uniform(0, 1.5) for k in fs.leg_dims]
        ea, eb = exponential_vector(fs, a), exponential_vector(fs, b)
        closed = exp_inner_product(fs, a, b)
        dev = max(dev, abs(closed - np.vdot(ea, eb)) / max(1.0, abs(closed)))
        legs = [np.concatenate(([1.0], np.sqrt(m) * v)).reshape(-1, 1)
                for m, v in zip(fs.masses, a)]
        dev = max(dev, np.linalg.norm(perm @ kron_all(legs) - ea))
    return dev


# ---------------------------------------------------------------------------
# lemmas
# ---------------------------------------------------------------------------

def lemmas_suite(ctx=None, scale=1.0, seed=2024, n_remainder=10 ** 4, n_dominance=500):
    chk = Checks(scale)
    rng = np.random.default_rng(seed)
    rows = np.zeros((n_remainder, 20))
    for i in range(n_remainder):
        n = int(rng.integers(1, 21))
        rows[i, :n] = rng.uniform(0, 3, n)
    lhs, rhs, holds = lemmas.remainder_inequality_batch(rows)
    chk.add("remainder-inequality", int(np.count_nonzero(~holds)), 0.0)
    fails = 0
    for _ in range(n_dominance):
        n = int(rng.integers(1, 13))
        q = rng.uniform(0, 1, n)
        fails += int(not lemmas.dominance_check(q)[0])
    chk.add("random-set-dominance", fails, 0.0)
    chk.add("dissecting-product", _dissecting_deviation(rng), 1e-4)
    chk.add("dissecting-product-atomic", _atomic_deviation(rng), 1e-9)
    dev = 0.0
    for p0 in (0.1, 1 / math.e, 0.5, 0.9):
        for m in range(6):
            exact, limit = lemmas.classicality_limit(p0, m, 10 ** 5)
            dev = max(dev, abs(exact - limit))
    chk.add("classicality-limit", dev, 1e-3)
    full = max(abs(lemmas.classicality_limit(p0, 400, 10 ** 5)[1] - 1.0)
               for p0 in (0.1, 1 / math.e, 0.5, 0.9))
    chk.add("classicality-full-support", full, 1e-12)
    return chk.as_list()


def random_measure(rng, atomic_only=False, tv=2.0):
    n_atoms = int(rng.integers(0, 5))
    locs = np.sort(rng.uniform(0, 1, n_atoms))
    vals = rng.standard_normal(n_atoms) + 1j * rng.standard_normal(n_atoms)
    dens = None
    if not atomic_only:
        k = int(rng.integers(1, 9))
        dens = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    raw = lemmas.DiscreteComplexMeasure(tuple(locs), tuple(vals), None if dens is None else tuple(dens))
    s = rng.uniform(0.1, 1.0) * tv / max(raw.total_variation(), 1e-12)
    return lemmas.DiscreteComplexMeasure(tuple(locs), tuple(vals * s),
                                         None if dens is None else tuple(np.asarray(dens) * s))


def _dissecting_deviation(rng, count=12):
    dev = 0.0
    for _ in range(count):
        nu = random_measure(rng)
        prods, rhs = lemmas.dissecting_product_limit(nu, 16)
        dev = max(dev, abs(prods[-1] - rhs) / max(1.0, abs(rhs)))
    return dev


def _atomic_deviation(rng, count=12):
    dev = 0.0
    for _ in range(count):
        nu = random_measure(rng, atomic_only=True)
        prods, rhs = lemmas.dissecting_product_limit(nu, 20)
        dev = max(dev, abs(prods[-1] - rhs))
    return dev


SUITE_FUNCS = {
    "algebra": algebra_suite,
    "factorization": factorization_suite,
    "unital": unital_suite,
    "spectrum": spectrum_suite,
    "fock": fock_suite,
    "lemmas": lambda ctx, scale=1.0: lemmas_suite(ctx, scale),
}
