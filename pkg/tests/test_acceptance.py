"""Acceptance criteria 1-9, each at its stated tolerance.

Every test carries ``@pytest.mark.criterion(k)``; conftest.py prints one
PASS/FAIL line per criterion at the end of the session.
"""

import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from splitcyc.characters import quadratic_character
from splitcyc.checks import interpolation_points
from splitcyc.cohomology import (
    FiniteAbelianGroup,
    GroupModule,
    eigenspace_cohomology_commutes,
    herbrand_check,
    regular_module,
    tate_cohomology,
)
from splitcyc.cyclotomic_units import b0_order, cyclotomic_unit_cohomology, norm_relation_check
from splitcyc.harness import canonical_report, run_suite
from splitcyc.iwasawa import (
    b0_model,
    bn_model_cohomology,
    bn_model_cohomology_full,
    required_level,
    synthetic_f,
)
from splitcyc.lfunction import lp_at_one_interpolate, lp_at_one_log
from splitcyc.quadratic_field import sinnott_gras_check
from splitcyc.random_modules import random_group_module
from splitcyc.scenarios import load_scenarios

PAIRS = [(13, 3), (229, 3), (44, 5)]
K = 10


# --- 1 -------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_cyclotomic_unit_orders():
    t0 = time.perf_counter()
    for n in (1, 2, 3):
        H = cyclotomic_unit_cohomology(3, 3 * n + 4, n, 0)
        want = FiniteAbelianGroup.cyclic(3**n)
        assert H[("eta_0", 0)] == want
        assert H[("eta_n", -1)] == want
    assert time.perf_counter() - t0 < 1.0


# --- 2 -------------------------------------------------------------------------


@pytest.mark.criterion(2)
@pytest.mark.parametrize("m", [0, 1])
@pytest.mark.parametrize("e", [0, 1, 2, 3])
@pytest.mark.parametrize("u", [1, 2])
def test_lambda_model_closed_form(u, e, m):
    t0 = time.perf_counter()
    n = e + 2 + m
    f = synthetic_f(3, 14, 3**n + 1, u, e)
    expected = FiniteAbelianGroup.cyclic(3**e) if e else FiniteAbelianGroup()
    assert b0_model(f) == expected
    for q in (0, -1):
        assert bn_model_cohomology(f, n, m, q) == expected
        assert bn_model_cohomology_full(f, n, m, q) == expected
    assert time.perf_counter() - t0 < 10.0


# --- 3 -------------------------------------------------------------------------


@pytest.mark.criterion(3)
@pytest.mark.parametrize("D,p", PAIRS)
def test_lvalue_methods_agree(D, p):
    chi = quadratic_character(D)
    a = lp_at_one_log(chi, p, K)
    b = lp_at_one_interpolate(chi, p, K, interpolation_points(p, K))
    certified = min(a.precision, b.precision)
    assert certified >= 6
    assert (a.residue() - b.residue()) % p**certified == 0


# --- 4 -------------------------------------------------------------------------


@pytest.mark.criterion(4)
@pytest.mark.parametrize("D,p,frozen", [(13, 3, 1), (229, 3, 3), (44, 5, 1)])
def test_base_layer_identity(D, p, frozen):
    from_l = p ** lp_at_one_log(quadratic_character(D), p, K).valuation
    from_units = b0_order(D, p, K)
    assert from_units == from_l == frozen


# --- 5 -------------------------------------------------------------------------


@pytest.mark.criterion(5)
@pytest.mark.parametrize("D,p", PAIRS)
def test_class_number_p_part_equals_unit_index(D, p):
    r = sinnott_gras_check(D, p, K)
    assert r.v_h == r.v_index
    assert r.local_consistent
    if (D, p) == (229, 3):
        assert r.v_h == r.v_index == 1


# --- 6 -------------------------------------------------------------------------

CASES = 200
SUITE_SETTINGS = settings(
    max_examples=CASES,
    deadline=None,
    derandomize=True,
    database=None,
    suppress_health_check=list(HealthCheck),
)
_suite_clock = {"start": None, "cases": {}}

group_params = st.tuples(
    st.integers(0, 2**63 - 1),      # seed
    st.sampled_from([3, 5]),        # p
    st.integers(1, 3),              # t, |G| = p^t <= 27
    st.integers(1, 4),              # rank
)


def _shape(p, t):
    return p, (min(t, 2) if p == 5 else t)


def _start():
    if _suite_clock["start"] is None:
        _suite_clock["start"] = time.perf_counter()


def _tick(name):
    _suite_clock["cases"][name] = _suite_clock["cases"].get(name, 0) + 1


def _random_module(params, delta=1):
    """Random quotient of Z_p[G x Delta]^r with Z_p[G]-rank r |Delta| at most max(rank, |Delta|)."""
    seed, p, t, rank = params
    p, t = _shape(p, t)
    rng = np.random.default_rng(seed)
    return rng, random_group_module(rng, p, 10, t, max(1, rank // delta), delta)


def _conjugated_regular(rng, p, t, rank):
    """Z_p[G]^rank in a random basis: x -> x P, action P^-1 S P."""
    R = regular_module(p, 10, t, rank)
    N = p**10
    S = np.array(R.action, dtype=object)
    g = S.shape[0]
    for _ in range(2 * g):
        i, j = rng.choice(g, size=2, replace=False)
        c = int(rng.integers(1, p**3))
        # x -> x E with E = I + c e_ij:  S -> E^-1 S E
        S[:, j] = (S[:, j] + c * S[:, i]) % N
        S[i, :] = (S[i, :] - c * S[j, :]) % N
    return GroupModule(p, 10, t, np.zeros((0, g), dtype=object), S)


@pytest.mark.criterion(6)
@SUITE_SETTINGS
@given(params=group_params, q=st.integers(-3, 3))
def test_suite_periodicity(params, q):
    _start()
    rng, M = _random_module(params)
    m = int(rng.integers(0, M.group_exp))
    assert tate_cohomology(q, M, m) == tate_cohomology(q + 2, M, m)
    _tick("periodicity")


@pytest.mark.criterion(6)
@SUITE_SETTINGS
@given(params=group_params)
def test_suite_herbrand(params):
    _start()
    rng, M = _random_module(params)
    m = int(rng.integers(0, M.group_exp))
    ok, h0, h1 = herbrand_check(M, m)
    assert ok and h0 == h1
    _tick("herbrand")


@pytest.mark.criterion(6)
@SUITE_SETTINGS
@given(params=group_params, q=st.sampled_from([0, -1]))
def test_suite_regular_acyclic(params, q):
    _start()
    seed, p, t, rank = params
    p, t = _shape(p, t)
    rng = np.random.default_rng(seed)
    R = _conjugated_regular(rng, p, t, rank)
    m = int(rng.integers(0, t))
    assert tate_cohomology(q, R, m).is_trivial()
    _tick("regular")


@pytest.mark.criterion(6)
@SUITE_SETTINGS
@given(params=group_params, data=st.data())
def test_suite_eigenspace_commutes(params, data):
    _start()
    p = params[1]
    delta = data.draw(st.sampled_from([d for d in (2, 4) if (p - 1) % d == 0]))
    _, M = _random_module(params, delta)
    chi = data.draw(st.integers(0, delta - 1))
    q = data.draw(st.sampled_from([0, -1]))
    assert eigenspace_cohomology_commutes(M, chi, q)[0]
    _tick("eigenspace")


@pytest.mark.criterion(6)
def test_suite_budget():
    """Runs after the four suites (file order): case counts and wall time."""
    counts = _suite_clock["cases"]
    for name in ("periodicity", "herbrand", "regular", "eigenspace"):
        assert counts.get(name, 0) >= CASES, (name, counts)
    elapsed = time.perf_counter() - _suite_clock["start"]
    assert elapsed < 60.0, elapsed


# --- 7 -------------------------------------------------------------------------


@pytest.mark.criterion(7)
@pytest.mark.parametrize("D,p,n,m", [(229, 3, 1, 0), (13, 3, 1, 0), (229, 3, 2, 1), (13, 3, 2, 1)])
def test_norm_coherence(D, p, n, m):
    t0 = time.perf_counter()
    r = norm_relation_check(D, p, n, m)
    assert r.holds
    assert time.perf_counter() - t0 < 120.0


# --- 8 -------------------------------------------------------------------------


@pytest.mark.criterion(8)
@pytest.mark.parametrize("D,p", PAIRS)
def test_three_way_order_agreement(D, p):
    chi = quadratic_character(D)
    predicted = p ** lp_at_one_log(chi, p, K).valuation
    f = lp_at_one_interpolate(chi, p, K, interpolation_points(p, K)).series
    n = required_level(f.constant_valuation(), 0)
    model = [bn_model_cohomology(f, n, 0, q) for q in (0, -1)]
    assert all(G.is_cyclic() and G.order == predicted for G in model)
    assert b0_order(D, p, K) == predicted


# --- 9 -------------------------------------------------------------------------


@pytest.mark.criterion(9)
def test_default_suite_deterministic_and_fast(tmp_path):
    scenarios = load_scenarios()
    t0 = time.perf_counter()
    cold = run_suite(scenarios, cache_root=tmp_path)
    cold_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    warm = run_suite(scenarios, cache_root=tmp_path)
    warm_s = time.perf_counter() - t0
    rerun = run_suite(scenarios, use_cache=False)
    assert all(r["status"] == "pass" for r in cold)
    assert canonical_report(cold) == canonical_report(warm) == canonical_report(rerun)
    assert cold_s < 15 * 60
    assert warm_s < 60
