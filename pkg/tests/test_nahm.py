"""Nahm sums, tadpole sums and the alternative representation."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nahmforge.lattice import NotPositiveDefinite
from nahmforge.nahm import (
    NahmSpec,
    TadpoleSpec,
    chi,
    chi_direct,
    nahm_sum,
    new_repn_rhs,
    quadratic_value,
    tadpole_matrix,
    x_recursive,
    x_squares,
)
from nahmforge.products import ProductSpec, pochhammer
from nahmforge.series import first_mismatch, invert

import oracle


def test_tadpole_matrix():
    assert tadpole_matrix(1) == ((1,),)
    assert tadpole_matrix(2) == ((2, -1), (-1, 1))
    t4 = tadpole_matrix(4)
    assert [t4[i][i] for i in range(4)] == [2, 2, 2, 1]
    assert t4[0][2] == 0 and t4[1][2] == -1
    with pytest.raises(ValueError):
        tadpole_matrix(0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=8))
def test_quadratic_form_matches_recurrence_and_squares(n):
    r = len(n)
    v = quadratic_value(tadpole_matrix(r), n)
    assert v == x_recursive(n) == x_squares(n)


def test_rogers_ramanujan_sum_against_brute_force():
    s = nahm_sum(NahmSpec(((2,),), (0,)), 30)
    assert s.coefficients(0, 7) == [1, 1, 1, 1, 2, 2, 3]
    assert oracle.as_dict(s, 30) == oracle.nahm_brute(((2,),), (0,), 0, 30)
    rr = invert(pochhammer(ProductSpec(1, 1, 5), 50) * pochhammer(ProductSpec(1, 4, 5), 50))
    assert first_mismatch(nahm_sum(NahmSpec(((2,),), (0,)), 50), rr, 50) is None


def test_single_origin_term():
    spec = NahmSpec(((2, 1), (1, 2)), (1, 1), F(3, 2), 2)
    s = nahm_sum(spec, 3 + F(1, 10))
    assert s.terms == {3: 1}


def test_nahm_with_tadpole_equals_chi():
    a = nahm_sum(NahmSpec(tadpole_matrix(3), (0, 0, 0)), 20)
    assert first_mismatch(a, chi(TadpoleSpec(3), 20), 20) is None


def test_chi_examples():
    c1 = chi(TadpoleSpec(1), 30)
    assert first_mismatch(c1, pochhammer(ProductSpec(-1, F(1, 2)), 30), 30) is None
    assert chi(TadpoleSpec(2), 1).coefficient(F(1, 2)) == 2
    assert chi(TadpoleSpec(4, (0, 0, 0, 0), 2), 1).terms == {0: 1}


@pytest.mark.parametrize("r", range(1, 7))
def test_chi_general_and_specialised_paths_agree(r):
    e = tuple(F(i % 3, 2) for i in range(r))  # the direct path takes nonnegative exponents
    spec = TadpoleSpec(r, e)
    assert first_mismatch(chi(spec, 25), chi_direct(spec, 25), 25) is None


def test_chi_against_brute_force():
    spec = TadpoleSpec(3, (1, -1, F(1, 2)))
    box = oracle.nahm_brute(tadpole_matrix(3), spec.exponents, 0, 8, box=12)
    assert oracle.as_dict(chi(spec, 8), 8) == box


@pytest.mark.parametrize("r,order", [(2, 30), (3, 25), (4, 20)])
def test_new_representation(r, order):
    assert first_mismatch(new_repn_rhs(r, order), chi(TadpoleSpec(r), order), order) is None
    assert new_repn_rhs(r, F(1, 3)).terms == {0: 1}
    with pytest.raises(ValueError):
        new_repn_rhs(1, 5)


def test_rejects_non_positive_definite():
    padded = tuple(row + (0,) for row in tadpole_matrix(3)) + ((0, 0, 0, 0),)
    with pytest.raises((NotPositiveDefinite, ValueError)):
        NahmSpec(padded, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        NahmSpec(((1, 2), (0, 1)), (0, 0))
    with pytest.raises(ValueError):
        TadpoleSpec(0)
