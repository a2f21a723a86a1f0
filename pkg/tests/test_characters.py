from fractions import Fraction

import numpy as np
import pytest

from oracles import bernoulli_egf, generalized_bernoulli_egf
from splitcyc.characters import (
    DirichletCharacter,
    bernoulli_number,
    eigenprojection_data,
    generalized_bernoulli,
    is_fundamental_discriminant,
    kronecker,
    project_eigenspace,
    quadratic_character,
    root_of_unity_zp,
)
from splitcyc.cohomology import StructuralError, regular_module


def test_bernoulli_numbers_match_series():
    assert [bernoulli_number(n) for n in range(11)] == bernoulli_egf(10)


@pytest.mark.parametrize("D", [5, 8, 12, 13])
def test_generalized_bernoulli_matches_series(D):
    chi = quadratic_character(D)
    values = {a: chi.value_int(a) for a in range(1, D + 1)}
    ref = generalized_bernoulli_egf(values, D, 6)
    for n in range(1, 7):
        assert generalized_bernoulli(n, chi).rational == ref[n]


def test_frozen_bernoulli_values():
    assert generalized_bernoulli(2, quadratic_character(5)).rational == Fraction(4, 5)
    assert generalized_bernoulli(2, quadratic_character(229)).rational == 324
    assert generalized_bernoulli(3, quadratic_character(229)).rational == 0


def test_quadratic_character_basics():
    chi = quadratic_character(229)
    assert chi.is_even() and chi.is_real() and not chi.is_trivial()
    assert chi.value_int(3) == 1
    assert quadratic_character(40).value_int(3) == 1
    assert quadratic_character(5).value_int(3) == -1
    with pytest.raises(ValueError):
        quadratic_character(20)


def test_fundamental_discriminants():
    assert [D for D in range(2, 45) if is_fundamental_discriminant(D)] == [5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44]


def test_kronecker_multiplicative():
    for a in range(1, 40):
        for b in range(1, 40):
            assert kronecker(44, a * b) == kronecker(44, a) * kronecker(44, b)


def test_root_of_unity_and_character_values():
    z = root_of_unity_zp(4, 5, 6)
    assert pow(z, 4, 5**6) == 1 and pow(z, 2, 5**6) != 1
    chi = DirichletCharacter.from_generator(13, 4)
    assert chi.value_zp(1, 5, 6) == 1
    vals = {chi.value_zp(a, 5, 6) for a in range(1, 13)}
    assert len(vals) == 4
    assert chi.conjugate()(2) == (-chi(2)) % 4


def test_eigenprojection_idempotent_coefficients_sum():
    d = eigenprojection_data(0, 2, 3, 5)
    assert sum(d.coeffs) % 3**5 == 1
    with pytest.raises(ValueError):
        eigenprojection_data(0, 3, 3, 5)


def test_project_eigenspace_requires_delta():
    with pytest.raises(StructuralError):
        project_eigenspace(regular_module(3, 5, 1), 0)


def test_project_eigenspace_splits_group_ring():
    from splitcyc.random_modules import group_ring_actions
    from splitcyc.cohomology import GroupModule

    S, Dl = group_ring_actions(3, 1, 2, 1)
    M = GroupModule(3, 6, 1, np.zeros((0, 6), dtype=object), S, Dl, 2)
    dims = [project_eigenspace(M, e).reduced().gens for e in (0, 1)]
    assert dims == [3, 3]
