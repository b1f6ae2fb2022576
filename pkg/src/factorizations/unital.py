"""Units, vector states and the vectors singled out by a factorization.

For a factorization ``f`` and a unit ``omega``, ``phi(x)`` projects onto
``span(F_x omega)``.  The unit identifies ``H`` with ``H_x (x) H_x'`` for
every ``x``; ``local_split`` and ``partition_split`` build those unitaries
explicitly from operators ``X_i`` in ``F_x`` with ``X_i omega`` orthonormal.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (ContractViolation, InternalError, NumericalInconsistency,
                     UnitCertificationError)
from .matcore import (DEFAULT_TOL, as_vector, kron_all, nullspace_basis,
                      orthonormal_columns, random_unit_vector)
from .vnalg import (DEFAULT_SEED, operators_reaching, compressed_dim,
                    generate_algebra, join_algebras, tensor_split)


def decision_tol(tol):
    """Threshold below which a deviation counts as an identity holding."""
    return 10 * tol.eq_tol


def cert_limit(tol, d):
    return 10 * tol.eq_tol * max(1, d)


def _action_span(basis, v, tol):
    return orthonormal_columns(np.einsum("kij,j->ik", basis, v), tol)


def product_rule_deviation(x, y, v):
    """``max |<v, X Y v> - <v, X v><v, Y v>|`` over basis pairs."""
    xa = np.einsum("kba,b->ka", x.basis.conj(), v)
    yb = np.einsum("kab,b->ka", y.basis, v)
    joint = xa.conj() @ yb.T
    ex = xa.conj() @ v
    ey = v.conj() @ yb.T
    return float(np.max(np.abs(joint - np.outer(ex, ey))))


def commutator_deviation(x, y, q):
    """``max ||(X Y - Y X) q||`` over basis pairs, ``q`` orthonormal columns."""
    xq = np.einsum("iab,bm->iam", x.basis, q)
    yq = np.einsum("jab,bm->jam", y.basis, q)
    xyq = np.einsum("iab,jbm->ijam", x.basis, yq)
    yxq = np.einsum("jab,ibm->ijam", y.basis, xq)
    diff = (xyq - yxq).reshape(x.dim * y.dim, -1)
    return float(np.max(np.linalg.norm(diff, axis=1))) if diff.size else 0.0


def is_independent_under(x, y, omega, tol=DEFAULT_TOL, join=None):
    """Independence of ``x`` and ``y`` under the vector state of ``omega``.

    Returns ``(holds, deviation)``.  ``join`` may pass a precomputed
    ``x v y``; the commutators are tested on ``span((x v y) omega)``.
    """
    omega = as_vector(omega)
    if x.ambient_dim != y.ambient_dim or omega.size != x.ambient_dim:
        raise ContractViolation("ambient dimensions differ")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ContractViolation("omega must have norm 1")
    dev_p = product_rule_deviation(x, y, omega)
    if join is None:
        join = join_algebras(x, y, tol)
    q = _action_span(join.basis, omega, tol)
    dev_c = commutator_deviation(x, y, q)
    dev = max(dev_p, dev_c)
    return dev <= decision_tol(tol), dev


@dataclass
class LocalSplit:
    unitary: np.ndarray
    bases: list
    deviations: dict


@dataclass
class VectorClassification:
    is_factorizable: bool
    is_multiplicative: Optional[bool] = None
    is_additive: Optional[bool] = None
    witnesses: dict = field(default_factory=dict)
    deviations: dict = field(default_factory=dict)


class UnitalSpec:
    """A factorization together with a certified unit."""

    def __init__(self, f, omega, tol=DEFAULT_TOL):
        omega = as_vector(omega)
        if omega.size != f.ambient_dim:
            raise ContractViolation(f"unit has length {omega.size}, expected {f.ambient_dim}")
        if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
            raise ContractViolation("unit must have norm 1")
        self.f = f
        self.omega = omega
        self.tol = tol
        self._reach = {}
        self._local = {}
        self._partition = {}
        self.certificate = self._certify()

    def _certify(self):
        full = np.eye(self.f.ambient_dim, dtype=np.complex128)
        devs = {}
        for mask in self.f.masks:
            comp = self.f.complement(mask)
            if comp < mask:
                devs[mask] = devs[comp]
                continue
            x, y = self.f.factor(mask), self.f.factor(comp)
            dev = max(product_rule_deviation(x, y, self.omega), commutator_deviation(x, y, full))
            devs[mask] = dev
            if dev > decision_tol(self.tol):
                raise UnitCertificationError(
                    f"unit fails independence for mask {mask} (deviation {dev:.3e})")
        return devs

    @property
    def ambient_dim(self):
        return self.f.ambient_dim

    def reach(self, mask):
        """Orthonormal basis ``q`` of ``H_x`` and operators with ``X_i omega = q_i``."""
        r = self._reach.get(mask)
        if r is None:
            r = operators_reaching(self.f.factor(mask).basis, self.omega, self.tol)
            self._reach[mask] = r
        return r

    def phi_basis(self, mask):
        return self.reach(mask)[0]

    def phi(self, mask):
        q = self.phi_basis(mask)
        return q @ q.conj().T

    def __repr__(self):
        return f"UnitalSpec({self.f!r})"


def phi_projection(u, mask):
    return u.phi(mask)


def _check_partition(f, masks):
    acc = 0
    for m in masks:
        if m == 0 or acc & m:
            raise ContractViolation(f"masks {masks} are not a partition of unity")
        acc |= m
    if acc != f.full:
        raise ContractViolation(f"masks {masks} do not cover every site")


def partition_split(u, masks, tol=None):
    """Unitary ``V: H -> (x)_p H_p`` for a partition of unity ``masks``.

    ``V*`` sends the product basis vector ``(i_1, ..., i_k)`` to
    ``X_{1,i_1} ... X_{k,i_k} omega``; in particular ``V omega`` is the tensor
    product of the local units.
    """
    tol = tol or u.tol
    masks = tuple(masks)
    key = masks
    if key in u._partition:
        return u._partition[key]
    f = u.f
    d = f.ambient_dim
    parts = []
    for m in masks:
        if m == 0:
            raise ContractViolation("partition contains the zero element")
        parts.append(m)
    _check_partition(f, parts)
    bases, ops = [], []
    for m in parts:
        q, x = u.reach(m)
        bases.append(q)
        ops.append(x)
    dims = [q.shape[1] for q in bases]
    if int(np.prod(dims)) != d:
        raise NumericalInconsistency(
            f"local dimensions {dims} do not multiply to {d}", law="partition-split")
    t = u.omega.reshape(1, d)
    for x in ops:
        t = np.einsum("iab,mb->mia", x, t).reshape(-1, d)
    w = t.T
    v = w.conj().T
    devs = {"unitary": float(np.linalg.norm(w.conj().T @ w - np.eye(d), 2))}
    local_units = [q.conj().T @ u.omega for q in bases]
    devs["unit"] = float(np.linalg.norm(v @ u.omega - kron_all(local_units).reshape(-1)))
    form = 0.0
    for k, m in enumerate(parts):
        q = bases[k]
        for b in f.factor(m).basis:
            legs = [np.eye(n) for n in dims]
            legs[k] = q.conj().T @ b @ q
            form = max(form, float(np.linalg.norm(v @ b @ w - kron_all(legs), 2)))
    devs["form"] = form
    worst = max(devs.values())
    if worst > cert_limit(tol, d):
        raise NumericalInconsistency(
            f"partition split certificate failed ({devs})", law="partition-split")
    out = LocalSplit(v, bases, devs)
    u._partition[key] = out
    return out


def local_split(u, mask, tol=None):
    """Unitary ``H -> H_x (x) H_x'`` sending ``omega`` to ``omega (x) omega``."""
    split = u._local.get(mask)
    if split is None:
        split = partition_split(u, _two_parts(u.f, mask), tol)
        u._local[mask] = split
    return split


def _two_parts(f, mask):
    comp = f.complement(mask)
    if mask == 0:
        return (f.full,)
    if comp == 0:
        return (f.full,)
    return (mask, comp)


def split_coordinates(u, mask, v):
    """Coordinates of ``v`` in ``H_x (x) H_x'`` as a ``(dim H_x, dim H_x')`` array."""
    comp = u.f.complement(mask)
    qa, qb = u.phi_basis(mask), u.phi_basis(comp)
    s = local_split(u, mask)
    return (s.unitary @ as_vector(v)).reshape(qa.shape[1], qb.shape[1])


def _fact_tests(f, xi, mask, tol):
    comp = f.complement(mask)
    x, xp = f.factor(mask), f.factor(comp)
    sx = _action_span(x.basis, xi, tol)
    sxp = _action_span(xp.basis, xi, tol)
    px = sx @ sx.conj().T
    pxp = sxp @ sxp.conj().T
    rank1 = np.outer(xi, xi.conj())
    dev_ii = float(np.linalg.norm(rank1 - pxp @ px, 2))
    dev_i = product_rule_deviation(x, xp, xi)
    # [span(x' xi)] lies in x by construction; it has to be minimal there
    minimal = compressed_dim(x, sxp, tol) == 1 and compressed_dim(xp, sx, tol) == 1
    if minimal:
        dev_vii = max(x.residual(pxp), xp.residual(px),
                      float(np.linalg.norm(pxp @ xi - xi)), float(np.linalg.norm(px @ xi - xi)))
    else:
        dev_vii = 1.0
    return {"product-rule": dev_i, "projection-product": dev_ii,
            "minimal-projections": dev_vii}, (pxp, px)


def is_factorizable(xi, f, tol=DEFAULT_TOL):
    """Three equivalent factorizability tests per index element, required to agree."""
    xi = as_vector(xi)
    if xi.size != f.ambient_dim:
        raise ContractViolation("vector length does not match the ambient dimension")
    n = np.linalg.norm(xi)
    if n <= 1e-300 or n <= tol.eq_tol * 1e-3:
        raise ContractViolation("the zero vector is never factorizable")
    xi = xi / n
    t = decision_tol(tol)
    verdict = True
    witnesses, devs = {}, {}
    for mask in f.masks:
        comp = f.complement(mask)
        if comp < mask:
            continue
        tests, wit = _fact_tests(f, xi, mask, tol)
        devs[mask] = tests
        votes = [v <= t for v in tests.values()]
        if len(set(votes)) > 1:
            if max(tests.values()) > 10 * t and min(tests.values()) <= t:
                raise NumericalInconsistency(
                    f"factorizability tests disagree at mask {mask}: {tests}",
                    law="factorizable-myriad")
            ok = sum(votes) >= 2
        else:
            ok = votes[0]
        if ok:
            witnesses[mask] = wit
            witnesses[comp] = (wit[1], wit[0])
        verdict = verdict and ok
    return VectorClassification(is_factorizable=verdict,
                                witnesses=witnesses if verdict else {}, deviations=devs)


def multiplicative_deviation(u, xi):
    """Worst violation of ``<omega, xi> = 1`` and ``xi = phi_x xi (x) phi_x' xi``."""
    xi = as_vector(xi)
    scale = max(1.0, float(np.linalg.norm(xi)) ** 2)
    dev = abs(np.vdot(u.omega, xi) - 1.0)
    for mask in u.f.masks:
        comp = u.f.complement(mask)
        if comp < mask or mask == 0:
            continue
        qa, qb = u.phi_basis(mask), u.phi_basis(comp)
        s = local_split(u, mask)
        lhs = s.unitary @ xi
        rhs = np.kron(qa.conj().T @ xi, qb.conj().T @ xi)
        dev = max(dev, float(np.linalg.norm(lhs - rhs)) / scale)
    return float(dev)


def is_multiplicative(u, xi, tol=None):
    """Definition route, cross-checked against factorizable with unit pairing 1."""
    tol = tol or u.tol
    xi = as_vector(xi)
    t = decision_tol(tol)
    dev_a = multiplicative_deviation(u, xi)
    by_def = dev_a <= t
    if np.linalg.norm(xi) <= 1e-12:
        by_fact = False
        pair_dev = 1.0
    else:
        pair_dev = abs(np.vdot(u.omega, xi) - 1.0) / max(1.0, float(np.linalg.norm(xi)))
        by_fact = pair_dev <= t and is_factorizable(xi, u.f, tol).is_factorizable
    if by_def != by_fact:
        grey = t < dev_a <= 10 * t or t < pair_dev <= 10 * t
        if not grey:
            raise NumericalInconsistency(
                f"multiplicative routes disagree (definition deviation {dev_a:.3e})",
                law="multiplicative-factorizable")
    return by_def


def additive_deviation(u, xi):
    xi = as_vector(xi)
    scale = max(1.0, float(np.linalg.norm(xi)))
    dev = 0.0
    for mask in u.f.masks:
        comp = u.f.complement(mask)
        if comp < mask:
            continue
        r = xi - u.phi(mask) @ xi - u.phi(comp) @ xi
        dev = max(dev, float(np.linalg.norm(r)))
    return dev / scale


def is_additive(u, xi, tol=None):
    tol = tol or u.tol
    return additive_deviation(u, xi) <= decision_tol(tol)


def additive_space(u, tol=None):
    """Orthonormal basis of all additive vectors (a linear subspace)."""
    tol = tol or u.tol
    d = u.ambient_dim
    rows = []
    for mask in u.f.masks:
        comp = u.f.complement(mask)
        if comp < mask:
            continue
        rows.append(np.eye(d) - u.phi(mask) - u.phi(comp))
    return nullspace_basis(np.vstack(rows), tol)


def classify_vector(u, xi, tol=None):
    tol = tol or u.tol
    xi = as_vector(xi)
    if np.linalg.norm(xi) <= 1e-12:
        return VectorClassification(False, False, True)
    c = is_factorizable(xi, u.f, tol)
    c.is_multiplicative = is_multiplicative(u, xi, tol)
    c.is_additive = is_additive(u, xi, tol)
    return c


def _closure_deviation(gens):
    """How far a generator list is from being closed under adjoint and product."""
    def dist(a):
        cands = [np.linalg.norm(a - g) for g in gens] + [np.linalg.norm(a)]
        return min(cands)
    dev = 0.0
    for g in gens:
        dev = max(dev, dist(g.conj().T))
        for h in gens:
            dev = max(dev, dist(g @ h))
    return float(dev)


def verify_raised_independence(x_gens, y_gens, omega, tol=DEFAULT_TOL):
    """Independence on generating *-monoids raised to the generated algebras."""
    omega = as_vector(omega)
    xs = [np.asarray(g, dtype=np.complex128) for g in x_gens]
    ys = [np.asarray(g, dtype=np.complex128) for g in y_gens]
    t = decision_tol(tol)
    hyp = max(_closure_deviation(xs), _closure_deviation(ys))
    for a in xs:
        for b in ys:
            hyp = max(hyp, float(np.linalg.norm(a @ b @ omega - b @ a @ omega)))
            lhs = np.vdot(omega, a @ b @ omega)
            rhs = np.vdot(omega, a @ omega) * np.vdot(omega, b @ omega)
            hyp = max(hyp, abs(lhs - rhs))
    report = {"hypothesis_deviation": hyp, "conclusion_deviation": None}
    if hyp > t:
        report["status"] = "precondition-failed"
        return report
    d = omega.size
    x = generate_algebra(d, xs, tol)
    y = generate_algebra(d, ys, tol)
    holds, dev = is_independent_under(x, y, omega, tol)
    report["conclusion_deviation"] = dev
    report["status"] = "passed" if holds else "failed"
    return report


def _fix_phase(v):
    k = int(np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v))))
    return v * (abs(v[k]) / v[k])


def find_factorizable_vector(f, seed=DEFAULT_SEED, tol=DEFAULT_TOL):
    """A unit factorizable vector of ``f``, found without using the site structure.

    Each atom's factor is split as ``C^g (x) C^g'``; the product of the rank
    ``g'`` projections ``U(|xi_p><xi_p| (x) 1)U*`` over atoms has rank one and
    its range is the returned vector.
    """
    rng = np.random.default_rng(seed)
    d = f.ambient_dim
    prod = np.eye(d, dtype=np.complex128)
    for k, atom in enumerate(f.atoms):
        cert = tensor_split(f.factor(atom), seed=seed + k, tol=tol)
        u, g, gp = cert.split
        xi = random_unit_vector(g, rng)
        r = u @ np.kron(np.outer(xi, xi.conj()), np.eye(gp)) @ u.conj().T
        prod = prod @ r
    cols = orthonormal_columns(prod, tol)
    if cols.shape[1] != 1:
        raise InternalError(f"product of atom projections has rank {cols.shape[1]}")
    v = _fix_phase(cols[:, 0])
    if not is_factorizable(v, f, tol).is_factorizable:
        raise NumericalInconsistency("discovered vector is not factorizable",
                                     law="a-factorizable-vector")
    return v.reshape(-1, 1)
