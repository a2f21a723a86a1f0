import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import log_series_rational
from splitcyc.padic import (
    PadicElement,
    PadicError,
    hensel_root,
    padic_log,
    teichmuller,
    unramified_embed_root_of_unity,
    valuation,
    vp,
)

primes = st.sampled_from([3, 5, 7])


def test_vp_and_valuation():
    assert vp(9, 3) == 2
    assert vp(10, 3) == 0
    assert valuation(PadicElement(3, 5, (0,))) == math.inf
    assert valuation(PadicElement(3, 5, (18,))) == 2


def test_teichmuller_is_root_of_unity():
    w = teichmuller(2, 5, 4)
    assert w.coeffs[0] == 182
    assert (w ** 4).coeffs[0] == 1
    with pytest.raises(PadicError):
        teichmuller(5, 5, 4)


@given(p=primes, K=st.integers(2, 9), k=st.integers(1, 10**6))
@settings(max_examples=80, deadline=None)
def test_log_matches_rational_series(p, K, k):
    x = 1 + p * k
    got = padic_log(PadicElement(p, K, (x,))).coeffs[0]
    assert got == log_series_rational(x, p, K)


def test_log_frozen_value():
    # log_3(4) mod 3^6 from the exact rational series
    assert padic_log(PadicElement(3, 6, (4,))).coeffs[0] == 534


def test_log_rejects_non_one_unit():
    with pytest.raises(PadicError):
        padic_log(PadicElement(3, 5, (2,)))


@given(a=st.integers(1, 10**5), b=st.integers(1, 10**5))
@settings(max_examples=50, deadline=None)
def test_log_homomorphism_unramified(a, b):
    d, zeta = unramified_embed_root_of_unity(13, 3, 6)
    x = PadicElement(3, 6, (1 + 3 * a, 3 * b, 3), zeta.modulus)
    y = PadicElement(3, 6, (1 + 3 * b, 9 * a, 0), zeta.modulus)
    assert padic_log(x * y) == padic_log(x) + padic_log(y)


def test_inverse_in_extension():
    d, zeta = unramified_embed_root_of_unity(13, 3, 8)
    x = zeta + 2
    assert x * x.inverse() == zeta.one()


def test_hensel_root():
    r = hensel_root([-229, 0, 1], 1, 3, 3)
    assert r.coeffs[0] == 16
    r = hensel_root([-229, 0, 1], None, 3, 12)
    assert (r.coeffs[0] ** 2 - 229) % 3**12 == 0
    with pytest.raises(PadicError):
        hensel_root([-5, 0, 1], None, 3, 5)  # 5 is not a square mod 3
    with pytest.raises(PadicError):
        hensel_root([-3, 0, 1], 0, 3, 5)  # double root mod 3


@pytest.mark.parametrize("m,p", [(13, 3), (5, 3), (44, 5), (8, 3), (7, 5)])
def test_unramified_root_of_unity(m, p):
    from sympy import n_order, primefactors

    d, zeta = unramified_embed_root_of_unity(m, p, 6)
    assert d == n_order(p, m)
    one = zeta.one()
    assert zeta ** m == one
    for q in primefactors(m):
        assert zeta ** (m // q) != one


def test_unramified_refuses_p_dividing_m():
    with pytest.raises(PadicError):
        unramified_embed_root_of_unity(15, 3, 5)


@given(p=primes, K=st.integers(1, 8), a=st.integers(), b=st.integers())
@settings(max_examples=60, deadline=None)
def test_ring_axioms_in_Zp(p, K, a, b):
    x, y = PadicElement(p, K, (a,)), PadicElement(p, K, (b,))
    assert (x * y).coeffs[0] == a * b % p**K
    assert (x - y + y) == x
