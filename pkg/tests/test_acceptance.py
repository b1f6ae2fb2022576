"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from factorizations.errors import NumericalInconsistency
from factorizations.factorization import build_from_product_probability, from_sites, verify_factorization
from factorizations.fock import classify_to_fock
from factorizations.lemmas import classicality_limit
from factorizations.matcore import DEFAULT_TOL, kron_all, random_unit_vector
from factorizations.spectrum import spectral_resolution
from factorizations.suites import (STANDARD_SITES, Context, fock_suite, generate_instance,
                                   lemmas_suite, product_unit, random_structured_algebra,
                                   spectrum_suite, standard_instances, unital_suite)
from factorizations.unital import (UnitalSpec, decision_tol, is_factorizable, is_multiplicative,
                                   partition_split)
from factorizations.vnalg import (commutant, generate_algebra, is_factor, join_algebras,
                                  meet_algebras, same_span)

RESULTS = {}


def record(n, ok, detail, elapsed=None):
    t = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}{t} {detail}"
    assert ok, RESULTS[n]


@pytest.fixture(scope="module")
def contexts():
    return [Context(inst) for inst in standard_instances()]


# 1 -------------------------------------------------------------------------

def test_criterion_01_algebra_laws():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    dc = dm = 0.0
    for _ in range(50):
        d, gens, _ = random_structured_algebra(rng, max_dim=12)
        x = generate_algebra(d, gens)
        dc = max(dc, same_span(x, commutant(commutant(x))))
        while True:
            dd, gens2, _ = random_structured_algebra(rng, max_dim=d)
            if dd == d:
                break
        y = generate_algebra(d, gens2)
        lhs = commutant(join_algebras(x, y))
        rhs = meet_algebras(commutant(x), commutant(y))
        dm = max(dm, same_span(lhs, rhs))
    el = time.perf_counter() - start
    record(1, dc <= 1e-8 and dm <= 1e-8 and el <= 30,
           f"double commutant {dc:.1e}, De Morgan {dm:.1e} over 50 algebras", el)


# 2 -------------------------------------------------------------------------

def test_criterion_02_factorization_laws():
    start = time.perf_counter()
    worst, factors_ok = {}, True
    for dims in STANDARD_SITES:
        f = from_sites(dims)
        rep = verify_factorization(f)
        for law in ("complement", "meet", "join", "distributivity"):
            worst[law] = max(worst.get(law, 0.0), rep.laws[law])
        factors_ok &= all(is_factor(f.factor(m)).is_factor for m in f.masks)
    el = time.perf_counter() - start
    ok = factors_ok and max(worst.values()) <= 1e-8 and el <= 60
    record(2, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
           + f", all factors {'pass' if factors_ok else 'FAIL'} is_factor", el)


# 3 -------------------------------------------------------------------------

def schmidt_factorizable(xi, dims):
    t = xi.reshape(dims)
    n = len(dims)
    for k in range(1, n):
        for left in itertools.combinations(range(n), k):
            rest = [i for i in range(n) if i not in left]
            m = t.transpose(list(left) + rest).reshape(int(np.prod([dims[i] for i in left])), -1)
            s = np.linalg.svd(m, compute_uv=False)
            if s[1] > 1e-6 * s[0]:
                return False
    return True


def probe_vectors(dims, rng):
    d = int(np.prod(dims))
    out = [product_unit(dims, rng) for _ in range(50)]
    for _ in range(50):
        a = [random_unit_vector(n, rng) for n in dims]
        b = [random_unit_vector(n, rng) for n in dims]
        v = kron_all([x.reshape(-1, 1) for x in a]) + rng.uniform(0.3, 1) * kron_all(
            [x.reshape(-1, 1) for x in b])
        out.append(v.reshape(-1))
    out += [random_unit_vector(d, rng) for _ in range(100)]
    return out


def three_verdicts(xi, f):
    """Per test, the verdict over all index elements, or None if the call raised."""
    try:
        c = is_factorizable(xi, f)
    except NumericalInconsistency:
        return None
    t = decision_tol(DEFAULT_TOL)
    names = ("product-rule", "projection-product", "minimal-projections")
    return tuple(all(tests[n] <= t for tests in c.deviations.values()) for n in names), \
        c.is_factorizable


def test_criterion_03_factorizability_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(303)
    disagree = oracle_miss = total = 0
    for dims in STANDARD_SITES:
        f = from_sites(dims)
        for v in probe_vectors(dims, rng):
            total += 1
            res = three_verdicts(v, f)
            if res is None or len(set(res[0])) > 1:
                disagree += 1
                continue
            oracle_miss += int(res[1] != schmidt_factorizable(v, dims))
    el = time.perf_counter() - start
    record(3, disagree == 0 and oracle_miss == 0,
           f"{total} vectors, {disagree} test disagreements, {oracle_miss} Schmidt-oracle misses", el)


# 4 -------------------------------------------------------------------------

def test_criterion_04_phi_calculus(contexts):
    laws = ("phi-intersection", "phi-injectivity", "orthogonal", "partition-product-rule")
    worst = dict.fromkeys(laws, 0.0)
    rank_clash = 0
    for ctx in contexts:
        for c in unital_suite(ctx, n_random=0):
            if c["law"] in worst:
                worst[c["law"]] = max(worst[c["law"]], c["max_deviation"])
        u = ctx.u
        for x in u.f.masks:
            for y in u.f.masks:
                if x & ~y == 0 and x != y:
                    rank_clash += int(u.phi_basis(x).shape[1] >= u.phi_basis(y).shape[1])
    ok = max(worst.values()) <= 1e-9 and rank_clash == 0
    record(4, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
           + f", {rank_clash} rank clashes")


# 5 -------------------------------------------------------------------------

def test_criterion_05_spectrum(contexts):
    exact = ("eigenspace-dimensions", "spectral-sets-pi-system", "counting-map",
             "projections-composition", "K-additivity")
    bad, worst = [], 0.0
    for ctx in contexts:
        checks = {c["law"]: c for c in spectrum_suite(ctx)}
        bad += [f"{ctx.inst.sites}:{k}" for k in exact if not checks[k]["pass"]]
        worst = max(worst, checks["projections-and-subspaces"]["max_deviation"])
    record(5, not bad and worst <= 1e-8,
           f"exact label laws {'hold' if not bad else bad}, projections-and-subspaces {worst:.1e}")


# 6 -------------------------------------------------------------------------

def test_criterion_06_fock(contexts):
    limits = {"fock-conjugation": 1e-7, "multiplicative-totality": 0.0,
              "exp-inner-product": 1e-8, "first-chaos-additive": 1e-8, "fock-legs": 0.0}
    worst = dict.fromkeys(limits, 0.0)
    for ctx in contexts:
        for c in fock_suite(ctx):
            if c["law"] in worst:
                worst[c["law"]] = max(worst[c["law"]], c["max_deviation"])
    ok = all(worst[k] <= limits[k] for k in limits)
    record(6, ok, f"{len(contexts)} instances (half scrambled): "
           + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


# 7 -------------------------------------------------------------------------

def test_criterion_07_discovery_pipeline():
    start = time.perf_counter()
    done, fails = 0, []
    for k, dims in enumerate(STANDARD_SITES):
        for cs in (None, 700 + k):
            inst = generate_instance(dims, seed=40 + k, unit_mode="discover", conjugate_seed=cs)
            assert inst.unit is None
            try:
                ctx = Context(inst)
                cls = classify_to_fock(ctx.u, ctx.r)
                if cls.fock.leg_dims != tuple(d - 1 for d in dims):
                    fails.append(dims)
                done += 1
            except Exception as exc:  # noqa: BLE001 - any failure fails the criterion
                fails.append((dims, repr(exc)))
    el = time.perf_counter() - start
    record(7, not fails and el <= 120, f"{done}/10 withheld-unit instances classified", el)


# 8 -------------------------------------------------------------------------

def test_criterion_08_lemmas():
    start = time.perf_counter()
    checks = lemmas_suite()
    cl = max(abs(e - l) for p0 in (0.1, 1 / math.e, 0.5, 0.9) for m in range(6)
             for e, l in [classicality_limit(p0, m, 10 ** 5)])
    el = time.perf_counter() - start
    bad = [c["law"] for c in checks if not c["pass"]]
    record(8, not bad and cl <= 1e-3 and el <= 60,
           ", ".join(f"{c['law']} {c['max_deviation']:.1e}" for c in checks), el)


# 9 -------------------------------------------------------------------------

def test_criterion_09_two_coins():
    f, omega = build_from_product_probability([[0.5, 0.5], [0.5, 0.5]])
    u = UnitalSpec(f, omega)
    rng = np.random.default_rng(909)
    mismatch = 0
    om = omega.reshape(-1)
    for k in range(60):
        if k % 2:
            v = kron_all([random_unit_vector(2, rng).reshape(-1, 1) for _ in range(2)]).reshape(-1)
        else:
            v = random_unit_vector(4, rng)
        pair = np.vdot(om, v)
        if abs(pair) < 1e-3:
            continue
        v = v / pair
        mismatch += int(is_multiplicative(u, v) != is_factorizable(v, f).is_factorizable)
    cls = classify_to_fock(u, spectral_resolution(u))
    ok = mismatch == 0 and cls.fock.leg_dims == (1, 1)
    record(9, ok, f"unit certified, {mismatch} multiplicative/factorizable mismatches, "
           f"Fock legs {cls.fock.leg_dims}")


# 10 ------------------------------------------------------------------------

def test_criterion_10_cli_full_run(tmp_path):
    cmd = [sys.executable, "-m", "factorizations.cli", "verify", "--suite", "all", "--standard"]
    reports, codes = [], []
    start = time.perf_counter()
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        t0 = time.perf_counter()
        codes.append(subprocess.run(cmd + ["--out", str(out)], capture_output=True).returncode)
        if k == 0:
            first = time.perf_counter() - t0
        rep = json.loads(out.read_text())
        rep.pop("wall_time")
        reports.append(rep)
    same = reports[0] == reports[1]
    record(10, codes == [0, 0] and same and first <= 300,
           f"exit codes {codes}, deterministic {same}, single run {first:.1f}s",
           time.perf_counter() - start)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
