import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import product_unital
from factorizations.errors import CapacityError, ContractViolation
from factorizations.factorization import verify_factorization
from factorizations.fock import (FockSpace, build_dfock, classify_to_fock, exp_inner_product,
                                 exp_map, exponential_vector, random_first_chaos)
from factorizations.spectrum import spectral_resolution
from factorizations.unital import UnitalSpec, is_multiplicative


def test_fock_dimensions():
    fs = FockSpace((2, 1), (1.0, 1.0))
    assert fs.total_dim == 6
    assert [b[2] for b in fs.blocks] == [1, 2, 1, 2]
    with pytest.raises(CapacityError):
        FockSpace((1,) * 6, (1.0,) * 6)
    with pytest.raises(ContractViolation):
        FockSpace((1, 1), (1.0, -1.0))


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_exp_inner_product_closed_form(legs, seed):
    rng = np.random.default_rng(seed)
    masses = rng.uniform(0.2, 2.0, len(legs))
    fs = FockSpace(tuple(legs), tuple(masses))
    u = [rng.standard_normal(k) + 1j * rng.standard_normal(k) for k in legs]
    v = [rng.standard_normal(k) + 1j * rng.standard_normal(k) for k in legs]
    expect = np.prod([1 + m * np.vdot(a, b) for m, a, b in zip(masses, u, v)])
    assert abs(exp_inner_product(fs, u, v) - expect) <= 1e-10 * max(1, abs(expect))


def test_exp_zero_is_vacuum():
    fs = FockSpace((2, 2), (1.0, 1.0))
    assert np.array_equal(exponential_vector(fs, [np.zeros(2), np.zeros(2)]), fs.vacuum)


def test_dfock_view_is_factorization():
    fs, view, vac = build_dfock((1, 2))
    assert view.ambient_dim == fs.total_dim == 6
    assert verify_factorization(view).ok
    u = UnitalSpec(view, vac)
    r = spectral_resolution(u)
    assert [r.mu[a] for a in r.labels] == [1, 1, 2, 2]


@pytest.mark.parametrize("framed", [False, True])
def test_classify_legs_and_certificate(site_dims, framed):
    u = product_unital(site_dims, seed=11, framed=framed)
    r = spectral_resolution(u)
    cls = classify_to_fock(u, r)
    assert cls.fock.leg_dims == tuple(d - 1 for d in site_dims)
    assert cls.deviations["conjugation"] <= 1e-7
    assert max(cls.deviations[k] for k in ("unitary", "vacuum", "exponential")) <= 1e-8


def test_exp_map_multiplicative_and_rejects_outside_chaos():
    u = product_unital((2, 3), seed=3, framed=True)
    r = spectral_resolution(u)
    g = random_first_chaos(r, np.random.default_rng(0), 0.8)
    e = exp_map(u, r, g)
    assert is_multiplicative(u, e)
    with pytest.raises(ContractViolation):
        exp_map(u, r, r.eigenbasis[3][:, 0])
