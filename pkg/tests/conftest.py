import sys
import numpy as np
import pytest

from factorizations.factorization import from_sites
from factorizations.matcore import haar_unitary
from factorizations.suites import STANDARD_SITES, product_unit
from factorizations.unital import UnitalSpec


def rng_for(seed):
    return np.random.default_rng(seed)


def product_unital(dims, seed=0, framed=False):
    """``UnitalSpec`` for ``from_sites(dims)`` with a random product unit."""
    rng = rng_for(seed)
    frame = haar_unitary(int(np.prod(dims)), rng) if framed else None
    f = from_sites(dims, frame=frame)
    omega = product_unit(dims, rng)
    if frame is not None:
        omega = frame @ omega
    return UnitalSpec(f, omega)


@pytest.fixture(params=STANDARD_SITES, ids=lambda d: "x".join(map(str, d)))
def site_dims(request):
    return request.param


@pytest.fixture
def rng():
    return rng_for(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
