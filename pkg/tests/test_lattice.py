"""Pruned lattice enumeration against the certified brute-force box."""

from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from nahmforge.lattice import Factor, LatticeSum, brute_force, evaluate, is_positive_definite, ldl, qpoch_inverse
from nahmforge.nahm import _unit


@st.composite
def lattice_specs(draw):
    r = draw(st.integers(1, 4))
    M = [[draw(st.integers(-1, 1)) for _ in range(r)] for _ in range(r)]
    A = tuple(
        tuple(sum(M[k][i] * M[k][j] for k in range(r)) + (2 if i == j else 0) for j in range(r)) for i in range(r)
    )
    B = tuple(draw(st.fractions(min_value=-2, max_value=3, max_denominator=2)) for _ in range(r))
    lower = tuple(draw(st.sampled_from([0, None])) for _ in range(r))
    factors = tuple(qpoch_inverse(1, _unit(i, r)) for i in range(r) if lower[i] == 0)
    signs = tuple(draw(st.integers(0, 1)) for _ in range(r))
    parities = ()
    if draw(st.booleans()):
        parities = ((tuple(draw(st.integers(0, 1)) for _ in range(r)), draw(st.integers(0, 1))),)
    extra = ()
    if r >= 1 and lower[0] == 0 and draw(st.booleans()):
        extra = (Factor(-1, F(1, 2), 1, 1, _unit(0, r)),)
    return LatticeSum(A, B, draw(st.fractions(min_value=0, max_value=2, max_denominator=4)),
                      lower, factors + extra, parities, signs)


@settings(max_examples=100, deadline=None)
@given(lattice_specs())
def test_pruned_equals_brute_force(ls):
    assert evaluate(ls, 15) == brute_force(ls, 15)


def test_ldl_reconstructs():
    A = ((2, -1, 0), (-1, 2, -1), (0, -1, 1))
    f = ldl(A)
    r = len(A)
    for i in range(r):
        for j in range(r):
            assert sum(f.L[i][k] * f.D[k] * f.L[j][k] for k in range(r)) == A[i][j]
    assert all(d > 0 for d in f.D)
    assert not is_positive_definite(((1, 1), (1, 1)))


def test_slack_does_not_change_coefficients():
    ls = LatticeSum(((2,),), (F(-3, 2),), 0, (None,), (), (), (0,))
    assert evaluate(ls, 20) == evaluate(ls, 20, slack=2)
