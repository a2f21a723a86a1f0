from fractions import Fraction

import pytest

from oracles import fraction_mod, vp_fraction
from splitcyc.characters import DirichletCharacter, generalized_bernoulli, quadratic_character
from splitcyc.lfunction import (
    certified_interpolation_precision,
    interpolation_nodes,
    lp_at_one_interpolate,
    lp_at_one_log,
    lp_value_at_negative,
    newton_extrapolate,
)

PAIRS = [(13, 3), (229, 3), (44, 5)]


def test_log_formula_valuations():
    assert lp_at_one_log(quadratic_character(13), 3, 8).valuation == 0
    assert lp_at_one_log(quadratic_character(229), 3, 8).valuation == 1


def test_log_formula_output_is_rational():
    r = lp_at_one_log(quadratic_character(229), 3, 8)
    assert r.value.degree == 1


@pytest.mark.parametrize("D,p", PAIRS)
def test_methods_agree(D, p):
    chi = quadratic_character(D)
    a = lp_at_one_log(chi, p, 10)
    b = lp_at_one_interpolate(chi, p, 10, 10)
    k = min(a.precision, b.precision)
    assert k >= 6
    assert (a.residue() - b.residue()) % p**k == 0
    assert a.valuation == b.valuation


@pytest.mark.parametrize("D,p", PAIRS)
def test_euler_factor_shifts_valuation_by_one(D, p):
    chi = quadratic_character(D)
    with_f = lp_at_one_log(chi, p, 10)
    without = lp_at_one_log(chi, p, 10, euler_factor=False)
    assert without.valuation == with_f.valuation + 1


def test_constant_series_is_reproduced():
    nodes = interpolation_nodes(3, 5)
    at0, coeffs = newton_extrapolate(nodes, [(Fraction(7),)] * 5)
    assert at0 == (Fraction(7),)
    assert all(c == (0,) for c in coeffs[1:])


def test_polynomial_data_is_reproduced_exactly():
    nodes = interpolation_nodes(5, 4)
    vals = [(Fraction(2) + 3 * x + Fraction(1, 5) * x * x,) for x in nodes]
    at0, _ = newton_extrapolate(nodes, vals)
    assert at0 == (Fraction(2),)


def test_J_and_J_plus_two_agree():
    chi = quadratic_character(229)
    a = lp_at_one_interpolate(chi, 3, 12, 8)
    b = lp_at_one_interpolate(chi, 3, 12, 10)
    k = min(a.precision, b.precision)
    assert (a.residue() - b.residue()) % 3**k == 0


def test_certified_precision_formula():
    assert certified_interpolation_precision(3, 3) == 4
    assert certified_interpolation_precision(3, 9) == 9 + 4  # v_3(3) + v_3(6) + v_3(9) = 4
    assert certified_interpolation_precision(5, 4) == 4


def test_degraded_precision_warns():
    with pytest.warns(RuntimeWarning):
        r = lp_at_one_interpolate(quadratic_character(13), 3, 20, 3)
    assert r.precision == 4
    assert "degraded precision" in r.notes


def test_divided_differences_are_integral_and_recorded():
    r = lp_at_one_interpolate(quadratic_character(229), 3, 10, 10)
    assert len(r.divided_difference_valuations) == 10
    assert min(r.divided_difference_valuations) >= 0


@pytest.mark.parametrize("D,p", PAIRS)
def test_leave_one_out(D, p):
    chi = quadratic_character(D)
    J, K = 9, 9
    r = lp_at_one_interpolate(chi, p, K, J)
    x = interpolation_nodes(p, J + 1)[-1]
    exact = lp_value_at_negative(chi, (p - 1) * (J + 1), p, K)
    assert (r.series(x) - exact) % p**r.precision == 0


def test_values_at_negative_integers_from_bernoulli():
    chi = quadratic_character(13)
    n = 4
    B = generalized_bernoulli(n, chi).rational
    expected = -(1 - Fraction(3) ** (n - 1)) * B / n
    assert vp_fraction(expected, 3) >= 0
    assert lp_value_at_negative(chi, n, 3, 6) == fraction_mod(expected, 3, 6)


def test_preconditions():
    with pytest.raises(ValueError):
        lp_at_one_log(quadratic_character(12), 3, 6)  # 3 divides the conductor
    odd = DirichletCharacter.from_generator(5, 4)
    with pytest.raises(ValueError):
        lp_at_one_log(odd, 3, 6)
    with pytest.raises(ValueError):
        lp_at_one_interpolate(quadratic_character(229), 3, 6, 1)
    with pytest.raises(ValueError):
        lp_at_one_interpolate(quadratic_character(5), 3, 6, 4)  # chi(3) = -1


def test_quartic_character_descends_to_Zp():
    # even character of order 4 and conductor 17, values in Z_5
    chi = DirichletCharacter.from_generator(17, 4)
    assert chi.is_even() and chi.order == 4
    a = lp_at_one_log(chi, 5, 6)
    assert a.value.degree == 1
