from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitcyc.cohomology import FiniteAbelianGroup
from splitcyc.cyclotomic_units import (
    CyclotomicElement,
    QuadraticNumber,
    b0_data,
    b0_order,
    base_unit,
    cyclotomic_number,
    cyclotomic_unit_cohomology,
    embed_quadratic,
    eta,
    layer_subgroup,
    norm_relation_check,
    to_quadratic,
)
from splitcyc.lfunction import lp_at_one_log
from splitcyc.characters import quadratic_character


@given(
    m=st.integers(2, 40),
    a=st.lists(st.integers(-50, 50), min_size=1, max_size=40),
    b=st.lists(st.integers(-50, 50), min_size=1, max_size=40),
)
@settings(max_examples=80, deadline=None)
def test_product_matches_cyclic_convolution(m, a, b):
    a = (a + [0] * m)[:m]
    b = (b + [0] * m)[:m]
    full = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    ref = [0] * m
    for i, c in enumerate(full):
        ref[i % m] += c
    got = CyclotomicElement(m, tuple(a)) * CyclotomicElement(m, tuple(b))
    assert list(got.coeffs) == ref


def test_full_norm_of_one_minus_zeta():
    # prod over all units of (1 - zeta_13^a) = Phi_13(1) = 13
    x = cyclotomic_number(13, 1, range(1, 13))
    assert x.reduced() == (13,) + (0,) * 11


def test_trivial_subgroup_gives_one_minus_zeta():
    assert cyclotomic_number(7, 2, [1]) == CyclotomicElement.one_minus(7, 2)


def test_real_subgroup_norm_is_invariant():
    x = cyclotomic_number(12, 1, [1, 11])
    assert x.galois(11).congruent(x)
    assert not x.galois(5).congruent(x)


def test_subgroup_check():
    with pytest.raises(ValueError):
        cyclotomic_number(12, 1, [1, 5, 7])
    with pytest.raises(ValueError):
        cyclotomic_number(12, 12, [1])


def test_congruence_is_modulo_cyclotomic_polynomial():
    # 1 + x + x^2 = 0 in Q(zeta_3), viewed at level 6
    z = CyclotomicElement.monomial(6, 2) + CyclotomicElement.monomial(6, 4) + CyclotomicElement.one(6)
    assert z.congruent(CyclotomicElement(6, (0,) * 6))


def test_quadratic_number_arithmetic():
    x = QuadraticNumber(13, Fraction(11, 2), Fraction(-3, 2))
    assert x.norm() == 1 and x.is_unit()
    assert x * x.inverse() == QuadraticNumber(13, Fraction(1), Fraction(0))
    assert (x**3) / x == x * x
    assert not QuadraticNumber(13, Fraction(1, 3), Fraction(0)).is_integral()


def test_gauss_sum_reconstructs_sqrt():
    from splitcyc.cyclotomic_units import _gauss_element

    g = _gauss_element(quadratic_character(13), 13)
    assert to_quadratic(g, 13) == QuadraticNumber(13, Fraction(0), Fraction(1))


@pytest.mark.parametrize(
    "D,a,b",
    [(13, Fraction(11, 2), Fraction(-3, 2)), (229, 5848201, -386460), (44, 199, -30)],
)
def test_base_units_frozen(D, a, b):
    xi = base_unit(D)
    assert (xi.a, xi.b) == (a, b)
    assert xi.norm() == 1 and xi.is_unit()


def test_layer_subgroup():
    H = layer_subgroup(13, 3, 1)
    chi = quadratic_character(13)
    assert all(chi.value_int(a) == 1 and pow(a, 2, 9) == 1 for a in H)
    assert len(H) == 12


@pytest.mark.parametrize("D,p,n,m", [(13, 3, 1, 0), (13, 3, 2, 1), (13, 3, 2, 0), (229, 3, 1, 0)])
def test_norm_relations(D, p, n, m):
    r = norm_relation_check(D, p, n, m)
    assert r.holds
    assert r.level == D * p ** (n + 1)


def test_eta_zero_is_literally_trivial_when_split():
    e = eta(0, 13, 3)
    assert e.literal_trivial
    assert e.value == base_unit(13)


def test_conjugate_embedding_inverts_unit():
    xi = base_unit(229)
    K = 10
    a = embed_quadratic(xi, 3, K)
    b = embed_quadratic(xi, 3, K, conjugate=True)
    assert (a * b).coeffs[0] == 1


@pytest.mark.parametrize("D,p,order", [(13, 3, 1), (229, 3, 3), (44, 5, 1)])
def test_b0_matches_lvalue(D, p, order):
    assert b0_order(D, p, 10) == order
    d = b0_data(D, p, 10)
    assert p ** lp_at_one_log(quadratic_character(D), p, 10).valuation == order
    assert d.log_valuation >= 1


def test_non_split_refused():
    with pytest.raises(ValueError):
        eta(1, 5, 3)
    with pytest.raises(ValueError):
        b0_order(12, 3, 8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cyclotomic_unit_cohomology_models(n):
    res = cyclotomic_unit_cohomology(3, 3 * n + 4, n)
    cyc = FiniteAbelianGroup.cyclic(3**n)
    assert res[("eta_0", 0)] == cyc and res[("eta_n", -1)] == cyc
    assert res[("eta_0", -1)].is_trivial() and res[("eta_n", 0)].is_trivial()
