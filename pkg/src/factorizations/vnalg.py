"""Finite-dimensional von Neumann algebras as Hilbert-Schmidt orthonormal bases.

An algebra on ``C^d`` is stored as a stack of ``k`` matrices, orthonormal in
``<A, B> = tr(A* B)``.  Meets, joins and commutants are then linear-algebra
operations on the ``d**2``-dimensional vectorized spans.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ContractViolation, InternalError, NumericalInconsistency
from .matcore import (DEFAULT_TOL, as_matrix, hermitian_eig, matrix_from_json,
                      matrix_to_json, nullspace_basis, orthonormal_columns, svd,
                      span_deviation, subspace_ops)

DEFAULT_SEED = 0xF0CC


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    ambient_dim: int
    basis: np.ndarray  # shape (k, d, d)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def columns(self):
        """Vectorized basis, one column per element, shape ``(d*d, k)``."""
        d = self.ambient_dim
        return self.basis.reshape(self.dim, d * d).T

    def residual(self, a):
        """Distance from ``a`` to the span, relative to ``max(1, ||a||_HS)``."""
        v = as_matrix(a).reshape(-1)
        c = self.columns
        r = v - c @ (c.conj().T @ v)
        return float(np.linalg.norm(r) / max(1.0, np.linalg.norm(v)))

    def contains(self, a, tol=DEFAULT_TOL):
        return self.residual(a) <= 10 * tol.eq_tol

    def __repr__(self):
        return f"AlgebraBasis(ambient_dim={self.ambient_dim}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class FactorCertificate:
    is_factor: bool
    center_dim: int
    minimal_projection: Optional[np.ndarray] = None
    split: Optional[Tuple[np.ndarray, int, int]] = None


def from_columns(d, cols):
    k = cols.shape[1]
    return AlgebraBasis(d, np.ascontiguousarray(cols.T.reshape(k, d, d)))


def span_of(d, mats, tol=DEFAULT_TOL):
    """HS-orthonormal basis of the linear span of ``mats`` (no closure taken)."""
    m = np.asarray(mats, dtype=np.complex128).reshape(-1, d * d).T
    return from_columns(d, orthonormal_columns(m, tol, scale=1.0))


def scalars(d):
    return AlgebraBasis(d, (np.eye(d, dtype=np.complex128) / np.sqrt(d))[None])


def full_algebra(d):
    units = np.zeros((d * d, d, d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            units[i * d + j, i, j] = 1.0
    return AlgebraBasis(d, units)


def conjugate(x, u):
    """The algebra ``u x u*`` (``u`` unitary)."""
    b = np.einsum("ij,kjl,ml->kim", u, x.basis, u.conj())
    return AlgebraBasis(x.ambient_dim, b)


def same_span(x, y):
    return span_deviation(x.columns, y.columns)


def _extend_span(cols, cands, tol):
    """New orthonormal directions of ``cands`` outside the span of ``cols``."""
    norms = np.linalg.norm(cands, axis=0)
    keep = norms > 1e-300
    if not np.any(keep):
        return cands[:, :0]
    c = cands[:, keep] / norms[keep]
    for _ in range(2):
        if cols.shape[1]:
            c = c - cols @ (cols.conj().T @ c)
    new = orthonormal_columns(c, tol, scale=1.0)
    if new.shape[1] and cols.shape[1]:
        new = new - cols @ (cols.conj().T @ new)
        q, _ = np.linalg.qr(new)
        new = q
    return new


def _close_under(d, start_cols, gens, tol):
    """Smallest span containing ``start_cols`` closed under right products by ``gens``."""
    cols = start_cols
    frontier = start_cols
    limit = 2 * d * d
    it = 0
    while frontier.shape[1]:
        it += 1
        if it > limit:
            raise InternalError("algebra closure did not stabilize")
        f = frontier.T.reshape(-1, d, d)
        prods = np.einsum("aij,bjk->abik", f, gens).reshape(-1, d * d).T
        new = _extend_span(cols, prods, tol)
        cols = np.hstack([cols, new])
        frontier = new
        if cols.shape[1] >= d * d:
            break
    return cols


def generate_algebra(ambient_dim, generators, tol=DEFAULT_TOL):
    """Unital *-algebra generated by ``generators``.

    Starts from the span of the identity, the generators and their adjoints
    and closes it under multiplication by that generating set.
    """
    d = int(ambient_dim)
    gens = [as_matrix(g) for g in generators]
    for g in gens:
        if g.shape != (d, d):
            raise ContractViolation(f"generator of shape {g.shape} on ambient dim {d}")
    g_all = []
    for g in gens:
        n = np.linalg.norm(g)
        if n > 0:
            g_all.append(g / n)
            g_all.append(g.conj().T / n)
    eye = np.eye(d, dtype=np.complex128)
    start = np.stack([eye] + g_all).reshape(-1, d * d).T
    cols = orthonormal_columns(start, tol, scale=1.0)
    if g_all:
        cols = _close_under(d, cols, np.stack(g_all), tol)
    return from_columns(d, cols)


def check_algebra(x, tol=DEFAULT_TOL):
    """Deviations of the four AlgebraBasis invariants (identity, adjoint, product, Gram)."""
    d = x.ambient_dim
    c = x.columns
    gram = c.conj().T @ c
    adj = np.conj(np.transpose(x.basis, (0, 2, 1))).reshape(x.dim, -1).T
    prods = np.einsum("aij,bjk->abik", x.basis, x.basis).reshape(-1, d * d).T
    def resid(m):
        if m.shape[1] == 0:
            return 0.0
        r = m - c @ (c.conj().T @ m)
        return float(np.max(np.linalg.norm(r, axis=0)))
    return {
        "identity": x.residual(np.eye(d)),
        "adjoint": resid(adj),
        "product": resid(prods),
        "gram": float(np.linalg.norm(gram - np.eye(x.dim), 2)),
    }


def _commutant_of(d, mats, tol):
    eye = np.eye(d)
    # row-major vec: vec(Y B) = (1 (x) B^T) vec Y, vec(B Y) = (B (x) 1) vec Y
    stack = np.vstack([np.kron(eye, b.T) - np.kron(b, eye) for b in mats])
    return from_columns(d, nullspace_basis(stack, tol))


def commutant(x, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    """All Y with Y B = B Y for every basis element B, as an algebra.

    The commutant of two random elements of ``x`` and their adjoints always
    contains ``x'``; it equals ``x'`` once every basis element of ``x``
    commutes with it, which is checked.  Otherwise the full constraint
    system over the basis is solved.
    """
    d = x.ambient_dim
    if x.dim > 4:
        rng = np.random.default_rng(seed)
        a = _random_elements(x, 2, rng)
        gens = [a[0], a[0].conj().T, a[1], a[1].conj().T]
        c = _commutant_of(d, gens, tol)
        xc = np.einsum("iab,jbc->ijac", x.basis, c.basis)
        cx = np.einsum("jab,ibc->ijac", c.basis, x.basis)
        if np.max(np.abs(xc - cx), initial=0.0) <= 10 * tol.eq_tol:
            return c
    return _commutant_of(d, list(x.basis), tol)


def _check_same_ambient(x, y):
    if x.ambient_dim != y.ambient_dim:
        raise ContractViolation(
            f"ambient dimensions differ: {x.ambient_dim} vs {y.ambient_dim}")


def _random_elements(x, count, rng):
    c = rng.standard_normal((count, x.dim)) + 1j * rng.standard_normal((count, x.dim))
    return np.einsum("ck,kij->cij", c, x.basis)


def join_algebras(x, y, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    """The algebra generated by ``x`` and ``y``.

    A couple of random elements from each side are used as generators; the
    result is then checked to contain both bases, and the full bases are
    adjoined only if that check fails.
    """
    _check_same_ambient(x, y)
    d = x.ambient_dim
    rng = np.random.default_rng(seed)
    gens = list(_random_elements(x, 2, rng)) + list(_random_elements(y, 2, rng))
    z = generate_algebra(d, gens, tol)
    missing = [b for b in np.concatenate([x.basis, y.basis]) if not z.contains(b, tol)]
    if missing:
        z = generate_algebra(d, list(x.basis) + list(y.basis), tol)
    return z


def meet_algebras(x, y, tol=DEFAULT_TOL):
    _check_same_ambient(x, y)
    cols = subspace_ops(x.columns, y.columns, "intersect", tol)
    return from_columns(x.ambient_dim, cols)


def is_factor(x, tol=DEFAULT_TOL, seed=DEFAULT_SEED):
    xp = commutant(x, tol)
    center = meet_algebras(x, xp, tol)
    joined = join_algebras(x, xp, tol, seed=seed)
    d = x.ambient_dim
    by_center = center.dim == 1
    by_join = joined.dim == d * d
    if by_center != by_join:
        raise NumericalInconsistency(
            f"factor criteria disagree: center dim {center.dim}, join dim {joined.dim}",
            law="factor")
    return FactorCertificate(is_factor=by_center, center_dim=center.dim)


def compressed_dim(x, v, tol=DEFAULT_TOL):
    """Dimension of ``{V* A V : A in x}`` for orthonormal columns ``v``."""
    comp = np.einsum("ji,kjl,lm->kim", v.conj(), x.basis, v)
    r = v.shape[1]
    return orthonormal_columns(comp.reshape(x.dim, r * r).T, tol, scale=1.0).shape[1]


def minimal_projection(x, seed=DEFAULT_SEED, tol=DEFAULT_TOL):
    """A non-zero minimal projection of ``x``.

    Repeatedly picks a random Hermitian element of the current corner
    ``P x P`` and passes to its smallest eigenprojection, until the corner is
    one-dimensional.
    """
    rng = np.random.default_rng(seed)
    d = x.ambient_dim
    v = np.eye(d, dtype=np.complex128)
    for _ in range(d + 1):
        comp = np.einsum("ji,kjl,lm->kim", v.conj(), x.basis, v)
        r = v.shape[1]
        span = orthonormal_columns(comp.reshape(x.dim, r * r).T, tol, scale=1.0)
        if span.shape[1] == 1:
            p = v @ v.conj().T
            if not x.contains(p, tol):
                raise InternalError("minimal projection fell outside the algebra")
            return p
        elems = span.T.reshape(-1, r, r)
        a = np.einsum("k,kij->ij", rng.standard_normal(len(elems)), elems)
        h = 0.5 * (a + a.conj().T)
        clusters = hermitian_eig(h, tol)
        _, cols = min(clusters, key=lambda c: c[1].shape[1])
        v = v @ cols
    raise InternalError("minimality not certified after d refinements")


def operators_reaching(basis, omega, tol):
    """Orthonormal basis ``f`` of ``span{B omega}`` plus operators ``X_i`` in the
    span of ``basis`` with ``X_i omega = f_i``."""
    w = np.einsum("kij,j->ik", basis, omega)
    u, s, vh = svd(w)
    rank = int(np.count_nonzero(s > tol.rank_tol * max(s[0], 1e-300)))
    coeff = vh[:rank].conj().T / s[:rank]
    ops = np.einsum("ki,kab->iab", coeff, basis)
    return u[:, :rank], ops


def factor_form_deviation(m, g, gp):
    """Distance of ``m`` (a ``g*gp`` square matrix) from the set ``A (x) 1``."""
    t = m.reshape(g, gp, g, gp)
    a = np.einsum("ijkj->ik", t) / gp
    return float(np.linalg.norm(m - np.kron(a, np.eye(gp)), 2))


def tensor_split(x, seed=DEFAULT_SEED, tol=DEFAULT_TOL):
    """Unitary ``U: C^g (x) C^g' -> C^d`` with ``U (A (x) 1) U* = x``.

    Uses minimal projections E of x and E' of x'; a unit vector w in the
    range of E E' gives the columns ``X_i X'_j w``.
    """
    d = x.ambient_dim
    xp = commutant(x, tol)
    e = minimal_projection(x, seed, tol)
    ep = minimal_projection(xp, seed + 1, tol)
    prod = e @ ep
    if np.linalg.norm(prod, 2) < 0.5:
        raise InternalError("product of minimal projections of x and x' vanishes")
    rng_cols = orthonormal_columns(prod, tol)
    if rng_cols.shape[1] != 1:
        raise InternalError(f"E E' has rank {rng_cols.shape[1]}, expected 1")
    omega = rng_cols[:, 0]
    f, ops = operators_reaching(x.basis, omega, tol)
    fp, _ = operators_reaching(xp.basis, omega, tol)
    g, gp = f.shape[1], fp.shape[1]
    if g * gp != d:
        raise InternalError(f"split dimensions {g}x{gp} do not multiply to {d}")
    u = np.einsum("iab,bj->aij", ops, fp).reshape(d, d)
    unit_dev = float(np.linalg.norm(u.conj().T @ u - np.eye(d), 2))
    form_dev = max(factor_form_deviation(u.conj().T @ b @ u, g, gp) for b in x.basis)
    if max(unit_dev, form_dev) > 10 * tol.eq_tol * d:
        raise NumericalInconsistency(
            f"tensor split certificate failed (unitarity {unit_dev:.2e}, form {form_dev:.2e})",
            law="tensor-split")
    return FactorCertificate(is_factor=True, center_dim=1, minimal_projection=e,
                             split=(u, g, gp))


def algebra_to_json(x):
    return {"ambient_dim": x.ambient_dim,
            "basis": [matrix_to_json(b) for b in x.basis]}


def algebra_from_json(obj):
    d = int(obj["ambient_dim"])
    mats = [matrix_from_json(m) for m in obj["basis"]]
    if not mats:
        raise ContractViolation("algebra JSON with empty basis")
    return AlgebraBasis(d, np.stack(mats))


def certificate_to_json(c):
    out = {"is_factor": bool(c.is_factor), "center_dim": int(c.center_dim)}
    if c.minimal_projection is not None:
        out["minimal_projection"] = matrix_to_json(c.minimal_projection)
    if c.split is not None:
        u, g, gp = c.split
        out["split"] = {"unitary": matrix_to_json(u), "dim_g": int(g), "dim_g_prime": int(gp)}
    return out
