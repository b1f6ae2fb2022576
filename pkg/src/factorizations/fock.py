"""Discrete Fock spaces over finitely many atoms.

The space is the orthogonal sum over subsets ``F`` of atoms of the blocks
``(x)_{f in F} F_f``.  Blocks are ordered by (size, bitmask) and each block
uses lexicographic multi-indices.  The weight ``prod_{f in F} nu_f`` of a
block is folded into the coordinates: a vector ``(x)_f u_f`` in block ``F``
has orthonormal coordinates ``sqrt(prod nu_f) * kron(u_f)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ContractViolation, NumericalInconsistency
from .factorization import FactorizationSpec, SiteSpec, mask_sites, popcount
from .matcore import DEFAULT_CAP, as_vector, kron_all, random_unit_vector, span_deviation
from .unital import partition_split
from .vnalg import conjugate

MAX_ATOMS = 5
FIRST_CHAOS_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    leg_dims: tuple
    masses: tuple

    def __post_init__(self):
        legs = tuple(int(k) for k in self.leg_dims)
        masses = tuple(float(m) for m in self.masses)
        object.__setattr__(self, "leg_dims", legs)
        object.__setattr__(self, "masses", masses)
        if not 1 <= len(legs) <= MAX_ATOMS:
            raise CapacityError(f"need 1..{MAX_ATOMS} atoms, got {len(legs)}")
        if len(masses) != len(legs):
            raise ContractViolation("one mass per atom")
        if any(k < 1 for k in legs):
            raise ContractViolation("leg dimensions must be >= 1")
        if any(not (m > 0 and np.isfinite(m)) for m in masses):
            raise ContractViolation("masses must be positive")
        if self.total_dim > DEFAULT_CAP:
            raise CapacityError(f"Fock dimension {self.total_dim} exceeds cap")

    @property
    def n_atoms(self):
        return len(self.leg_dims)

    @property
    def blocks(self):
        """``[(mask, offset, size), ...]`` in storage order."""
        out, off = [], 0
        for mask in sorted(range(1 << self.n_atoms), key=lambda m: (popcount(m), m)):
            size = int(np.prod([self.leg_dims[i] for i in mask_sites(mask)], dtype=np.int64))
            out.append((mask, off, size))
            off += size
        return out

    @property
    def total_dim(self):
        return int(np.prod([1 + k for k in self.leg_dims], dtype=np.int64))

    @property
    def vacuum(self):
        v = np.zeros((self.total_dim, 1), dtype=np.complex128)
        v[0, 0] = 1.0
        return v

    def to_json(self):
        return {"legs": list(self.leg_dims), "masses": list(self.masses),
                "block_order": "popcount-lex"}


def bracket_permutation(fs):
    """Permutation taking the site basis of ``(x)_b (C e_b + F_b)`` to the Fock basis.

    Site index ``0`` on leg ``b`` is ``e_b``; index ``j >= 1`` is the
    ``(j-1)``-th basis vector of ``F_b``.
    """
    sites = [1 + k for k in fs.leg_dims]
    d = fs.total_dim
    offsets = {mask: off for mask, off, _ in fs.blocks}
    perm = np.zeros((d, d))
    for flat, idx in enumerate(np.ndindex(*sites)):
        mask = 0
        pos = 0
        for b, i in enumerate(idx):
            if i:
                mask |= 1 << b
                pos = pos * fs.leg_dims[b] + (i - 1)
        perm[offsets[mask] + pos, flat] = 1.0
    return perm


def build_dfock(leg_dims, masses=None):
    """Fock space, its factorization view and its vacuum.

    The factorization is the site factorization of ``(x)_b (C e_b + F_b)``
    transported by ``bracket_permutation``.
    """
    if masses is None:
        masses = [1.0] * len(leg_dims)
    fs = FockSpace(tuple(leg_dims), tuple(masses))
    perm = bracket_permutation(fs)
    view = FactorizationSpec(SiteSpec(tuple(1 + k for k in fs.leg_dims)), frame=perm)
    return fs, view, fs.vacuum


def _check_legs(fs, u):
    if len(u) != fs.n_atoms:
        raise ContractViolation(f"need {fs.n_atoms} leg vectors, got {len(u)}")
    out = []
    for k, (v, n) in enumerate(zip(u, fs.leg_dims)):
        v = as_vector(v)
        if v.size != n:
            raise ContractViolation(f"leg {k}: vector of size {v.size}, expected {n}")
        out.append(v)
    return out


def exponential_vector(fs, u):
    u = _check_legs(fs, u)
    out = np.zeros(fs.total_dim, dtype=np.complex128)
    for mask, off, size in fs.blocks:
        legs = mask_sites(mask)
        weight = np.sqrt(np.prod([fs.masses[i] for i in legs]))
        out[off:off + size] = weight * kron_all([u[i].reshape(-1, 1) for i in legs]).reshape(-1)
    return out.reshape(-1, 1)


def exp_inner_product(fs, u, v):
    """``prod_b (1 + nu_b <u_b, v_b>)``, checked against the direct inner product."""
    u = _check_legs(fs, u)
    v = _check_legs(fs, v)
    closed = complex(np.prod([1.0 + m * np.vdot(a, b) for m, a, b in zip(fs.masses, u, v)]))
    eu, ev = exponential_vector(fs, u), exponential_vector(fs, v)
    direct = complex(np.vdot(eu, ev))
    scale = max(1.0, float(np.linalg.norm(eu) * np.linalg.norm(ev)))
    if abs(closed - direct) > 1e-8 * scale:
        raise NumericalInconsistency(
            f"exponential inner product {closed} vs direct {direct}", law="exp-inner-product")
    return closed


def first_chaos_projector(r):
    from .spectrum import event_projector
    return event_projector(r, [a for a in r.labels if popcount(a) == 1])


def first_chaos_defect(r, g):
    """Mass of ``mu_g`` outside the singleton points, relative to ``||g||^2``."""
    g = as_vector(g)
    n2 = float(np.vdot(g, g).real)
    if n2 <= 1e-24:
        return 0.0
    inside = sum(float(np.linalg.norm(r.eigenbasis[a].conj().T @ g) ** 2)
                 for a in r.labels if popcount(a) == 1)
    return max(0.0, n2 - inside) / n2


def atom_partition(u):
    return tuple(u.f.atoms)


def exp_map(u, r, g, tol=None, check=True):
    """``(x)_p (omega + phi_p g)`` read through the split over atoms."""
    from .unital import is_multiplicative
    tol = tol or u.tol
    g = as_vector(g)
    if g.size != u.ambient_dim:
        raise ContractViolation("g has the wrong length")
    if first_chaos_defect(r, g) > FIRST_CHAOS_TOL:
        raise ContractViolation("g is not in the first chaos")
    split = partition_split(u, atom_partition(u), tol)
    legs = [q.conj().T @ (u.omega + g) for q in split.bases]
    out = split.unitary.conj().T @ kron_all([l.reshape(-1, 1) for l in legs])
    if check:
        zero = split.unitary.conj().T @ kron_all([(q.conj().T @ u.omega).reshape(-1, 1)
                                                  for q in split.bases])
        if np.linalg.norm(zero.reshape(-1) - u.omega) > 1e-8:
            raise NumericalInconsistency("Exp(0) differs from the unit", law="exp-zero")
        if not is_multiplicative(u, out, tol):
            raise NumericalInconsistency("Exp(g) is not multiplicative", law="exp-multiplicative")
    return out


def random_first_chaos(r, rng, scale=1.0):
    parts = []
    for a in r.labels:
        if popcount(a) == 1:
            v = r.eigenbasis[a]
            c = rng.standard_normal(v.shape[1]) + 1j * rng.standard_normal(v.shape[1])
            parts.append(v @ c)
    g = np.sum(parts, axis=0)
    return scale * g / max(np.linalg.norm(g), 1e-300)


@dataclass
class Classification:
    fock: FockSpace
    unitary: np.ndarray     # Fock space -> H
    view: FactorizationSpec
    deviations: dict


def classify_to_fock(u, r, tol=None, seed=0xF0CC, n_checks=4):
    """Unitary from the discrete Fock space with unit masses onto ``H``.

    Leg ``p`` of the site picture of the Fock space is mapped to ``H_p``
    by sending ``e_p`` to the unit and the basis of ``F_p`` to the
    eigenbasis of the spectral point ``{p}``.
    """
    tol = tol or u.tol
    f = u.f
    split = partition_split(u, atom_partition(u), tol)
    legs, blocks = [], []
    for p, q in enumerate(split.bases):
        h = r.eigenbasis.get(1 << p)
        if h is None or h.shape[1] == 0:
            raise NumericalInconsistency(f"atom {p} has an empty one-particle space",
                                         law="fock-legs")
        legs.append(h.shape[1])
        blocks.append(np.hstack([(q.conj().T @ u.omega).reshape(-1, 1), q.conj().T @ h]))
    fs, view, vac = build_dfock(legs, [1.0] * len(legs))
    perm = view.frame
    t = split.unitary.conj().T @ kron_all(blocks) @ perm.conj().T
    d = f.ambient_dim
    devs = {"unitary": float(np.linalg.norm(t.conj().T @ t - np.eye(d), 2)),
            "vacuum": float(np.linalg.norm(t @ vac - u.omega.reshape(-1, 1)))}
    conj = 0.0
    for mask in f.masks:
        image = conjugate(view.factor(mask), t)
        conj = max(conj, span_deviation(image.columns, f.factor(mask).columns))
    devs["conjugation"] = conj
    rng = np.random.default_rng(seed)
    exp_dev = 0.0
    for _ in range(n_checks):
        coords = [random_unit_vector(k, rng) * rng.uniform(0.2, 1.0) for k in legs]
        g = sum((r.eigenbasis[1 << p] @ c) for p, c in enumerate(coords))
        lhs = t @ exponential_vector(fs, coords)
        rhs = exp_map(u, r, g, tol, check=False)
        exp_dev = max(exp_dev, float(np.linalg.norm(lhs - rhs)))
    devs["exponential"] = exp_dev
    if devs["conjugation"] > 1e-7 or max(devs["unitary"], devs["vacuum"], exp_dev) > 1e-8:
        raise NumericalInconsistency(f"Fock classification certificate failed: {devs}",
                                     law="fock-classification")
    return Classification(fs, t, view, devs)
