import numpy as np
import pytest

from conftest import product_unital
from factorizations.errors import ContractViolation
from factorizations.factorization import popcount
from factorizations.spectrum import (SpectralProbability, counting_map, event_projector,
                                     is_spectral_independence_probability, measure_as_probability,
                                     spectral_projection, spectral_resolution, spectral_set,
                                     vector_measure)


def expected_mu(dims, label):
    """Dimension of point A for a product unit: prod over A of (d_i - 1)."""
    return int(np.prod([dims[i] - 1 for i in range(len(dims)) if label >> i & 1]))


@pytest.mark.parametrize("dims,mu", [((2, 2), [1, 1, 1, 1]), ((2, 3), [1, 1, 2, 2]),
                                     ((3, 3), [1, 2, 2, 4])])
def test_frozen_dimensions(dims, mu):
    r = spectral_resolution(product_unital(dims, seed=1))
    assert [r.mu[a] for a in r.labels] == mu


@pytest.mark.parametrize("framed", [False, True])
def test_dimensions_follow_product_formula(site_dims, framed):
    r = spectral_resolution(product_unital(site_dims, seed=3, framed=framed))
    assert sorted(r.labels) == list(range(1 << len(site_dims)))
    for a in r.labels:
        assert r.mu[a] == expected_mu(site_dims, a)
    assert sum(r.mu.values()) == int(np.prod(site_dims))


def test_label_identities():
    r = spectral_resolution(product_unital((2, 2, 3), seed=2))
    for x in range(8):
        for y in range(8):
            assert set(spectral_set(r, x & y)) == set(spectral_set(r, x)) & set(spectral_set(r, y))
        spectral_projection(r, x)
    k = counting_map(r)
    assert all(k[a] == popcount(a) for a in r.labels)


def test_eigenbasis_resolves_identity():
    r = spectral_resolution(product_unital((2, 3), seed=8, framed=True))
    p = event_projector(r, r.labels)
    assert np.linalg.norm(p - np.eye(6)) < 1e-10


def test_vector_measure_of_unit_is_point_mass():
    u = product_unital((2, 3), seed=8)
    r = spectral_resolution(u)
    mu = vector_measure(r, u.omega, u.omega)
    assert abs(mu[0] - 1) < 1e-12
    assert sum(abs(v) for a, v in mu.items() if a) < 1e-12


def test_independence_probability():
    r = spectral_resolution(product_unital((2, 2), seed=0))
    prod = SpectralProbability({0: 0.5 * 0.6, 1: 0.5 * 0.6, 2: 0.5 * 0.4, 3: 0.5 * 0.4})
    assert is_spectral_independence_probability(r, prod)
    skew = SpectralProbability({0: 0.4, 1: 0.1, 2: 0.1, 3: 0.4})
    assert not is_spectral_independence_probability(r, skew)
    no_empty = SpectralProbability({1: 0.5, 3: 0.5})
    assert not is_spectral_independence_probability(r, no_empty)


def test_probability_validation():
    with pytest.raises(ContractViolation):
        SpectralProbability({0: 0.5, 1: 0.6})


def test_measure_as_probability():
    u = product_unital((2, 2), seed=0)
    r = spectral_resolution(u)
    xi = np.ones(4) / 2
    p = measure_as_probability(r, vector_measure(r, xi, xi))
    assert abs(sum(p.weights.values()) - 1) < 1e-12
