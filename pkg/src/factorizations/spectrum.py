"""Joint spectral resolution of the commuting projections ``phi_x``.

Spectral points are labeled by subsets of atoms (bitmasks).  The point ``A``
is the joint eigenspace on which ``phi_x`` is the identity exactly when
``A`` is contained in ``x``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, NumericalInconsistency
from .factorization import popcount
from .matcore import as_vector, hermitian_eig


def label_order(mask):
    return (popcount(mask), mask)


@dataclass
class SpectralResolution:
    n_atoms: int
    labels: list        # bitmasks, ordered by (popcount, mask)
    eigenbasis: dict    # label -> orthonormal columns
    mu: dict            # label -> eigenspace dimension
    empty_point: int = 0

    @property
    def full(self):
        return (1 << self.n_atoms) - 1

    @property
    def ambient_dim(self):
        return sum(self.mu.values())

    def to_json(self, eigenbasis=False):
        from .matcore import matrix_to_json
        out = {"points": [{"label": int(a), "dim": int(self.eigenbasis[a].shape[1]),
                           "mu": int(self.mu[a])} for a in self.labels]}
        if eigenbasis:
            for p in out["points"]:
                p["eigenbasis"] = matrix_to_json(self.eigenbasis[p["label"]])
        return out


@dataclass
class SpectralProbability:
    weights: dict       # label -> probability

    def __post_init__(self):
        w = {int(k): float(v) for k, v in self.weights.items()}
        if any(v < 0 or not np.isfinite(v) for v in w.values()):
            raise ContractViolation("weights must be finite and non-negative")
        if abs(sum(w.values()) - 1.0) > 1e-12:
            raise ContractViolation("weights must sum to 1")
        self.weights = w


def _zero_or_one(lam, tol):
    if abs(lam) <= 1e-8:
        return 0
    if abs(lam - 1.0) <= 1e-8:
        return 1
    return None


def spectral_resolution(u, tol=None):
    """Refine ``H`` by each co-atom projection ``phi(full - {p})`` in turn.

    A block lies in the range of ``phi(full - {p})`` exactly when its label
    avoids ``p``, so after all atoms the blocks are the joint eigenspaces.
    Each block's full pattern over the index is then checked to be the
    filter generated by its label.
    """
    tol = tol or u.tol
    f = u.f
    d = f.ambient_dim
    full = f.full
    blocks = [(0, np.eye(d, dtype=np.complex128))]
    for p in range(f.n_atoms):
        bit = 1 << p
        phi = u.phi(full ^ bit)
        nxt = []
        for label, v in blocks:
            c = v.conj().T @ phi @ v
            for lam, cols in hermitian_eig(c, tol):
                s = _zero_or_one(lam, tol)
                if s is None:
                    raise NumericalInconsistency(
                        f"co-atom projection has eigenvalue {lam:.3e} on a block",
                        law="phi-commutation")
                nxt.append((label | (0 if s else bit), v @ cols))
        blocks = nxt
    merged = {}
    for label, v in blocks:
        if label in merged:
            raise NumericalInconsistency(f"label {label} produced twice", law="spectral-sets")
        merged[label] = v
    for label, v in merged.items():
        for x in f.masks:
            expect = 1.0 if (label & ~x) == 0 else 0.0
            r = u.phi(x) @ v - expect * v
            if np.linalg.norm(r, 2) > 1e-8:
                raise NumericalInconsistency(
                    f"phi({x}) does not act as {expect:g} on point {label}",
                    law="spectral-sets")
    if 0 not in merged or merged[0].shape[1] != 1:
        raise NumericalInconsistency("the empty point is not one-dimensional", law="empty-point")
    if abs(abs(np.vdot(merged[0][:, 0], u.omega)) - 1.0) > 1e-8:
        raise NumericalInconsistency("the empty point is not spanned by the unit", law="empty-point")
    labels = sorted(merged, key=label_order)
    return SpectralResolution(f.n_atoms, labels, merged,
                              {a: merged[a].shape[1] for a in labels})


def spectral_set(r, x):
    return [a for a in r.labels if a & ~x == 0]


def counting_map(r):
    """``K = sum over atoms p of 1_{S minus S_(full - p)}``, checked against ``|A|``."""
    k = {a: 0 for a in r.labels}
    for p in range(r.n_atoms):
        inside = set(spectral_set(r, r.full ^ (1 << p)))
        for a in r.labels:
            if a not in inside:
                k[a] += 1
    for a, v in k.items():
        if v != popcount(a):
            raise NumericalInconsistency(f"K({a}) = {v} but |A| = {popcount(a)}",
                                         law="counting-map")
    return k


def spectral_projection(r, x):
    """The label map ``A -> A & x``, checked on preimages and compositions."""
    present = set(r.labels)
    pr = {}
    for a in r.labels:
        b = a & x
        if b not in present:
            raise NumericalInconsistency(f"pr_{x}({a}) = {b} is not a point",
                                         law="spectral-projection")
        pr[a] = b
    comp = r.full ^ x
    for y in range(r.full + 1):
        pre = {a for a in r.labels if pr[a] & ~y == 0}
        if pre != set(spectral_set(r, y | comp)):
            raise NumericalInconsistency(f"preimage identity fails for x={x}, y={y}",
                                         law="spectral-projection")
        for a in r.labels:
            if pr[a] & y != a & (x & y):
                raise NumericalInconsistency(f"composition fails for x={x}, y={y}",
                                             law="projections-composition")
    return pr


def vector_measure(r, h, g):
    """``label -> <E_s h, E_s g>``; with ``h = g`` this is ``mu_g``."""
    h = as_vector(h)
    g = as_vector(g)
    return {a: complex(np.vdot(r.eigenbasis[a].conj().T @ h, r.eigenbasis[a].conj().T @ g))
            for a in r.labels}


def event_projector(r, labels):
    cols = [r.eigenbasis[a] for a in labels]
    if not cols:
        return np.zeros((r.ambient_dim, r.ambient_dim), dtype=np.complex128)
    v = np.hstack(cols)
    return v @ v.conj().T


def is_spectral_independence_probability(r, nu, tol=1e-9):
    """Charges the empty point, and ``(A & x, A - x)`` is a product law for every ``x``."""
    w = {a: nu.weights.get(a, 0.0) for a in r.labels}
    if set(nu.weights) - set(r.labels):
        return False
    if w[r.empty_point] <= tol:
        return False
    for x in range(r.full + 1):
        comp = r.full ^ x
        joint = {}
        for a, p in w.items():
            key = (a & x, a & comp)
            joint[key] = joint.get(key, 0.0) + p
        left, right = {}, {}
        for (a, b), p in joint.items():
            left[a] = left.get(a, 0.0) + p
            right[b] = right.get(b, 0.0) + p
        for a, pa in left.items():
            for b, pb in right.items():
                if abs(joint.get((a, b), 0.0) - pa * pb) > tol:
                    return False
    return True


def measure_as_probability(r, mu):
    total = sum(mu.values()).real
    if total <= 0:
        raise ContractViolation("measure has no mass")
    w = {a: max(0.0, v.real) / total for a, v in mu.items()}
    s = sum(w.values())
    return SpectralProbability({a: v / s for a, v in w.items()})
