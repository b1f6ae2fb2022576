"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays; vectors are ``(d, 1)`` columns or
1-d arrays where that reads better.  Everything here is a pure function.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .errors import CapacityError, ContractViolation

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rank_tol: relative singular-value cutoff for rank decisions.
    eq_tol: absolute threshold for matrix-equality assertions.
    cluster_gap: relative gap separating eigenvalue clusters.
    """

    rank_tol: float = 1e-9
    eq_tol: float = 1e-9
    cluster_gap: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "eq_tol", "cluster_gap"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ContractViolation(f"{name} must lie in (0, 1), got {v!r}")

    def scaled(self, factor):
        """All three thresholds multiplied by ``factor`` (clamped below 1)."""
        f = float(factor)
        return Tolerance(min(self.rank_tol * f, 0.5),
                         min(self.eq_tol * f, 0.5),
                         min(self.cluster_gap * f, 0.5))


DEFAULT_TOL = Tolerance()


def as_matrix(a):
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ContractViolation(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def as_vector(v):
    x = np.asarray(v, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise ContractViolation("vector has non-finite entries")
    return x


def opnorm(a):
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def kron(a, b, cap=DEFAULT_CAP):
    a = as_matrix(a)
    b = as_matrix(b)
    if a.size == 0 or b.size == 0:
        raise ContractViolation("kron of an empty matrix")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > cap:
        raise CapacityError(f"kron result {rows}x{cols} exceeds cap {cap}")
    return np.kron(a, b)


def kron_all(mats, cap=DEFAULT_CAP):
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = kron(out, m, cap=cap)
    return out


def svd(a, full_matrices=False):
    """``numpy`` SVD, retried with LAPACK ``gesvd`` when ``gesdd`` fails to converge."""
    try:
        return np.linalg.svd(a, full_matrices=full_matrices)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(a, full_matrices=full_matrices, lapack_driver="gesvd")


def hermitian_eig(a, tol=DEFAULT_TOL):
    """Clustered eigendecomposition of a Hermitian matrix.

    Returns a list of ``(eigenvalue, columns)`` in increasing eigenvalue
    order; ``columns`` is an orthonormal basis of the cluster's eigenspace
    and the eigenvalue is the cluster mean.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ContractViolation("hermitian_eig needs a square matrix")
    scale = 1.0 + opnorm(a)
    if np.linalg.norm(a - a.conj().T, 2) > tol.eq_tol * scale:
        raise ContractViolation("hermitian_eig: input is not Hermitian")
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    labels = _kernels.cluster_sorted(w, tol.cluster_gap * scale)
    out = []
    for c in range(int(labels[-1]) + 1 if len(labels) else 0):
        sel = labels == c
        out.append((float(w[sel].mean()), v[:, sel]))
    return out


def nullspace_basis(a, tol=DEFAULT_TOL, scale=None):
    """Orthonormal columns spanning the numerical kernel of ``a``.

    A singular value counts towards the rank when it exceeds
    ``rank_tol * max(sigma_max, scale)``; ``scale`` defaults to 1 so that a
    matrix of pure round-off has full kernel.
    """
    a = as_matrix(a)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.complex128)
    # thin SVD already returns all right singular vectors when rows >= cols
    _, s, vh = svd(a, full_matrices=a.shape[0] < n)
    smax = float(s[0]) if s.size else 0.0
    floor = 1.0 if scale is None else float(scale)
    rank = int(np.count_nonzero(s > tol.rank_tol * max(smax, floor)))
    return vh[rank:].conj().T


def orthonormal_columns(a, tol=DEFAULT_TOL, scale=None):
    """Orthonormal basis of the column span of ``a`` (same cutoff rule)."""
    a = as_matrix(a)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    u, s, _ = svd(a)
    smax = float(s[0]) if s.size else 0.0
    floor = smax if scale is None else float(scale)
    rank = int(np.count_nonzero(s > tol.rank_tol * max(smax, floor)))
    if smax == 0.0:
        rank = 0
    return u[:, :rank]


def numerical_rank(a, tol=DEFAULT_TOL):
    return orthonormal_columns(a, tol).shape[1]


def projector(u):
    return u @ u.conj().T


def _check_orthonormal(u, tol, name):
    k = u.shape[1]
    if k and np.linalg.norm(u.conj().T @ u - np.eye(k), 2) > max(tol.eq_tol, 1e-10) * 10 * (1 + k):
        raise ContractViolation(f"{name} does not have orthonormal columns")


def subspace_ops(u, v, mode, tol=DEFAULT_TOL):
    """Intersect, sum, or relative complement of two column spans.

    ``mode`` is one of ``"intersect"``, ``"sum"``, ``"complement_within"``.
    Inputs must have orthonormal columns.
    """
    u = as_matrix(u)
    v = as_matrix(v)
    if u.shape[0] != v.shape[0]:
        raise ContractViolation("subspace_ops: row counts differ")
    _check_orthonormal(u, tol, "u")
    _check_orthonormal(v, tol, "v")
    if mode == "intersect":
        if u.shape[1] == 0 or v.shape[1] == 0:
            return np.zeros((u.shape[0], 0), dtype=np.complex128)
        # w = u c lies in span(v) iff (1 - P_v) u c = 0
        resid = u - v @ (v.conj().T @ u)
        c = nullspace_basis(resid, tol, scale=1.0)
        w = u @ c
        return _reorthonormalize(w)
    if mode == "sum":
        both = np.hstack([u, v])
        return orthonormal_columns(both, tol, scale=1.0)
    if mode == "complement_within":
        resid = v - u @ (u.conj().T @ v)
        if v.shape[1] and np.linalg.norm(resid, 2) > tol.eq_tol * 10:
            raise ContractViolation("complement_within: span(v) is not inside span(u)")
        if v.shape[1] == 0:
            return u.copy()
        c = nullspace_basis(v.conj().T @ u, tol, scale=1.0)
        return _reorthonormalize(u @ c)
    raise ContractViolation(f"unknown subspace mode {mode!r}")


def _reorthonormalize(w):
    if w.shape[1] == 0:
        return w
    q, r = np.linalg.qr(w)
    return q * np.sign(np.diag(r).real + (np.diag(r).real == 0))


def span_deviation(u, v):
    """Largest principal-angle sine between two column spans.

    Equal to ``||P_u - P_v||_2``; returns 1.0 when the dimensions differ.
    Computed from ``(1 - P_v) u`` so that tiny angles are resolved to
    machine precision.
    """
    u = as_matrix(u)
    v = as_matrix(v)
    if u.shape[1] != v.shape[1]:
        return 1.0
    if u.shape[1] == 0:
        return 0.0
    resid = u - v @ (v.conj().T @ u)
    return float(min(1.0, np.linalg.norm(resid, 2)))


def haar_unitary(d, rng):
    """Haar-random unitary (QR of a complex Gaussian with phase fix)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_unit_vector(d, rng):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def matrix_to_json(a):
    a = as_matrix(a)
    flat = a.reshape(-1)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj):
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed matrix JSON: {exc}") from None
    if len(data) != rows * cols:
        raise ContractViolation("matrix JSON: data length != rows*cols")
    arr = np.array([complex(float(re), float(im)) for re, im in data],
                   dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ContractViolation("matrix JSON: non-finite entry")
    return arr.reshape(rows, cols)
