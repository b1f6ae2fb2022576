import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from factorizations.errors import ContractViolation
from factorizations.factorization import from_sites
from factorizations.matcore import haar_unitary
from factorizations.suites import random_structured_algebra
from factorizations.vnalg import (algebra_from_json, algebra_to_json, check_algebra, commutant,
                                  conjugate, full_algebra, generate_algebra, is_factor,
                                  join_algebras, meet_algebras, minimal_projection, same_span,
                                  scalars, tensor_split)


def shape_dims(shape):
    """Dimensions of ``sum M_n (x) 1_m`` and of its commutant, counted from the shape."""
    return sum(n * n for n, _ in shape), sum(m * m for _, m in shape)


@given(st.integers(0, 2 ** 31))
@settings(max_examples=20, deadline=None)
def test_generated_algebra_dimensions_match_block_shape(seed):
    rng = np.random.default_rng(seed)
    d, gens, shape = random_structured_algebra(rng, max_dim=8)
    x = generate_algebra(d, gens)
    dim, cdim = shape_dims(shape)
    # distinct blocks with the same shape may be unitarily merged by chance only with prob 0
    assert x.dim == dim
    assert commutant(x).dim == cdim
    assert max(check_algebra(x).values()) < 1e-9


@given(st.integers(0, 2 ** 31))
@settings(max_examples=15, deadline=None)
def test_double_commutant(seed):
    rng = np.random.default_rng(seed)
    d, gens, _ = random_structured_algebra(rng, max_dim=8)
    x = generate_algebra(d, gens)
    assert same_span(x, commutant(commutant(x))) < 1e-8


def test_scalars_and_full_are_commutants():
    assert same_span(commutant(full_algebra(3)), scalars(3)) < 1e-12
    assert same_span(commutant(scalars(3)), full_algebra(3)) < 1e-12


def test_factor_detection(rng):
    f = from_sites((2, 3))
    assert is_factor(f.factor(1)).is_factor
    diag = generate_algebra(4, [np.diag([1.0, 2.0, 3.0, 4.0])])
    cert = is_factor(diag)
    assert not cert.is_factor and cert.center_dim == 4


def test_join_and_meet_of_site_factors():
    f = from_sites((2, 2, 2))
    j = join_algebras(f.factor(1), f.factor(2))
    assert same_span(j, f.factor(3)) < 1e-10
    m = meet_algebras(f.factor(3), f.factor(6))
    assert same_span(m, f.factor(2)) < 1e-10


@pytest.mark.parametrize("dims,mask,g", [((2, 3), 1, 2), ((2, 3), 2, 3), ((2, 2, 3), 5, 6)])
def test_tensor_split_recovers_leg_dimensions(dims, mask, g):
    rng = np.random.default_rng(3)
    d = int(np.prod(dims))
    x = conjugate(from_sites(dims).factor(mask), haar_unitary(d, rng))
    u, gg, gp = tensor_split(x).split
    assert (gg, gp) == (g, d // g)
    assert np.linalg.norm(u.conj().T @ u - np.eye(d)) < 1e-9
    for b in x.basis:
        m = u.conj().T @ b @ u
        t = m.reshape(gg, gp, gg, gp)
        a = np.einsum("ijkj->ik", t) / gp
        assert np.linalg.norm(m - np.kron(a, np.eye(gp))) < 1e-9


def test_minimal_projection_rank():
    f = from_sites((2, 3))
    p = minimal_projection(f.factor(1))
    # a minimal projection of M_2 (x) 1_3 has rank 3
    assert round(np.trace(p).real) == 3
    assert np.linalg.norm(p @ p - p) < 1e-10


def test_json_roundtrip():
    x = from_sites((2, 2)).factor(1)
    y = algebra_from_json(algebra_to_json(x))
    assert same_span(x, y) < 1e-14


def test_mismatched_ambient_rejected():
    with pytest.raises(ContractViolation):
        meet_algebras(scalars(2), scalars(3))
