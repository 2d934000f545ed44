"""Products, theta functions and the classical product identities."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nahmforge.products import (
    J,
    J2,
    ProductSpec,
    ThetaSpec,
    finite_product,
    infinite_pochhammer,
    jtp_product,
    phi,
    pochhammer,
    pochhammer_shift,
    psi,
    qbinom,
    theta,
    theta0,
    theta1,
)
from nahmforge.reduction import SHIFT_IDENTITIES, shift_identity_lhs, shift_identity_poly, shift_identity_rhs
from nahmforge.series import QSeries, SeriesError, first_mismatch, invert, make_monomial

import oracle

N = 30


def test_pochhammer_examples():
    assert pochhammer(ProductSpec(1, 3, 1, 0)).terms == {0: 1}
    assert oracle.as_dict(pochhammer(ProductSpec(1, 1), N), N) == oracle.poch(1, 1, 1, None, N)
    assert pochhammer(ProductSpec(1, 0, 1, 1)).is_zero()
    with pytest.raises(SeriesError):
        pochhammer(ProductSpec(1, 0), 10)
    euler = pochhammer(ProductSpec(1, 1), 16)
    assert euler.terms == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1}


def test_pochhammer_shift():
    assert pochhammer_shift(1, 1, 1, 20).is_zero()
    lhs = pochhammer_shift(-1, 1, 1, 20)
    assert first_mismatch(lhs, pochhammer(ProductSpec(-1, 1), 20).scale(2), 20) is None
    direct = oracle.poch(1, F(-3, 2), 1, None, 20)
    assert oracle.as_dict(pochhammer_shift(1, F(1, 2), 2, 20), 20) == direct


def test_j_products():
    assert oracle.as_dict(J(1, N), N) == oracle.poch(1, 1, 1, None, N)
    assert first_mismatch(J2(1, 2, N), J(1, N) * pochhammer(ProductSpec(1, 1, 2), N), N) is None
    assert J(7, 7).terms == {0: 1}
    with pytest.raises(ValueError):
        J2(3, 3, 10)


def test_theta_examples():
    assert theta(ThetaSpec(1, 0), F(1, 2)).terms == {0: 1}
    assert theta0(17).terms == {0: 1, 4: 2, 16: 2}
    z = ThetaSpec(-1, F(1, 2))
    assert first_mismatch(theta(z, 20), jtp_product(z, 20), 20) is None


def test_phi_psi_and_product_forms():
    assert psi(11).terms == {0: 1, 1: 1, 3: 1, 6: 1, 10: 1}
    assert phi(10).terms == {0: 1, 1: 2, 4: 2, 9: 2}
    assert first_mismatch(theta0(60) + theta1(60), phi(60), 60) is None
    j = lambda m: J(m, 80)  # noqa: E731
    assert first_mismatch(phi(80), j(2) ** 5 * invert(j(1) ** 2 * j(4) ** 2), 80) is None
    assert first_mismatch(psi(80), j(2) ** 2 * invert(j(1)), 80) is None
    assert first_mismatch(theta0(80), j(8) ** 5 * invert(j(4) ** 2 * j(16) ** 2), 80) is None
    t1 = (j(16) ** 2 * invert(j(8))).scale(2).shift(1).truncate(80)
    assert first_mismatch(theta1(80), t1, 80) is None


def test_qbinom():
    assert qbinom(7, 0).terms == {0: 1}
    assert qbinom(4, 2).terms == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    assert qbinom(3, 5).is_zero()
    for n in range(9):
        for m in range(n + 1):
            assert qbinom(n, m) == qbinom(n, n - m)
            num = oracle.qpoch_q(n, 60)
            den = oracle.mul(oracle.qpoch_q(m, 60), oracle.qpoch_q(n - m, 60), 60)
            assert oracle.mul(qbinom(n, m).terms, den, 60) == num


signed_exp = st.tuples(st.sampled_from([1, -1]), st.fractions(min_value=F(1, 2), max_value=3, max_denominator=2))


@settings(max_examples=40, deadline=None)
@given(signed_exp, signed_exp)
def test_q_binomial_theorem(a, z):
    (sa, alpha), (sz, beta) = a, z
    acc = F(12)
    terms = int(acc / beta) + 1  # z^terms has valuation >= acc
    lhs = QSeries({}, acc)
    for n in range(terms):
        t = finite_product(sa, alpha, 1, n) * invert(finite_product(1, 1, 1, n), acc) if n else QSeries({0: 1})
        lhs = lhs + (t * make_monomial(sz**n, n * beta)).truncate(acc)
    # (az;q)_inf / (z;q)_inf with az = sa*sz q^{alpha+beta}
    rhs = infinite_pochhammer(sa * sz, alpha + beta, 1, acc) * invert(infinite_pochhammer(sz, beta, 1, acc))
    assert first_mismatch(lhs, rhs, acc) is None


@settings(max_examples=30, deadline=None)
@given(signed_exp)
def test_euler_identities(z):
    sz, beta = z
    acc = F(15)
    s1 = QSeries({}, acc)
    s2 = QSeries({}, acc)
    n = 0
    while n * beta < acc:
        inv = invert(finite_product(1, 1, 1, n), acc) if n else QSeries({0: 1})
        s2 = s2 + (inv * make_monomial(sz**n, n * beta)).truncate(acc)
        e = F(n * n - n, 2) + n * beta
        if e < acc:
            s1 = s1 + (inv * make_monomial(sz**n, e)).truncate(acc)
        n += 1
    assert first_mismatch(s1, infinite_pochhammer(-sz, beta, 1, acc), acc) is None
    assert first_mismatch(s2, invert(infinite_pochhammer(sz, beta, 1, acc)), acc) is None


@pytest.mark.parametrize("n", [0, 1, 5, 12, 30])
@pytest.mark.parametrize("z", [(1, F(1)), (-1, F(1, 2)), (1, F(-2)), (-1, F(0))])
def test_finite_euler(n, z):
    sz, beta = z
    lhs = finite_product(-sz, beta, 1, n)
    rhs = QSeries({})
    for i in range(n + 1):
        rhs = rhs + qbinom(n, i) * make_monomial(sz**i, F(i * i - i, 2) + i * beta)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, -1]), st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.sampled_from([F(1), F(2), F(1, 2)]))
def test_jacobi_triple_product(sign, beta, base):
    spec = ThetaSpec(sign, beta, base)
    assert first_mismatch(theta(spec, 20), jtp_product(spec, 20), 20) is None


def test_jtp_vanishing_point():
    # z = -q^{1/2}: the product contains (1; q)_inf and the sum cancels in pairs
    spec = ThetaSpec(-1, F(1, 2))
    assert theta(spec, 30).is_zero()
    assert jtp_product(spec, 30).is_zero()


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([1, -1]), st.integers(1, 3),
    st.sampled_from([1, -1]), st.integers(1, 3),
    st.sampled_from([1, -1]), st.integers(1, 3),
    st.sampled_from([1, -1]), st.integers(1, 3),
)
def test_heine_transformation(sa, ea, sb, eb, sc, ec, st_, et):
    """Heine's transformation, both sides expanded by the naive oracle.

    All parameters are ``+-q^e`` with ``e >= 1``, so every series converges.
    ``(c/b; q)_n`` has valuation at least ``-3`` (only its factors with
    ``k < 2`` can carry negative exponents), which fixes the working budget.
    """
    M = 12
    W = M + 3
    a, b, c, t = (sa, ea), (sb, eb), (sc, ec), (st_, et)
    cb = (sc * sb, ec - eb)
    at = (sa * st_, ea + et)

    def ratio(num, den, budget):
        return oracle.mul(num, oracle.inverse(den, budget), budget)

    left = {}
    for n in range(M // et + 1):
        num = oracle.mul(oracle.poch(*a, 1, n, M), oracle.poch(*b, 1, n, M), M)
        den = oracle.mul(oracle.qpoch_q(n, M), oracle.poch(*c, 1, n, M), M)
        left = oracle.add(left, oracle.scale(oracle.shift(ratio(num, den, M), n * et), st_**n))
    left = {e: v for e, v in left.items() if e < M}

    pre = ratio(
        oracle.mul(oracle.poch(*b, 1, None, W), oracle.poch(*at, 1, None, W), W),
        oracle.mul(oracle.poch(*c, 1, None, W), oracle.poch(*t, 1, None, W), W),
        W,
    )
    inner = {}
    for n in range(W // eb + 1):
        num = oracle.mul(oracle.poch(*cb, 1, n, W), oracle.poch(*t, 1, n, W), W)
        den = oracle.mul(oracle.qpoch_q(n, W), oracle.poch(*at, 1, n, W), W)
        inner = oracle.add(inner, oracle.scale(oracle.shift(ratio(num, den, W), n * eb), sb**n))
    inner = {e: v for e, v in inner.items() if e < W}
    right = {e: v for e, v in oracle.mul(pre, inner, M).items() if e < M}
    assert left == right


@pytest.mark.parametrize("label", sorted(SHIFT_IDENTITIES))
def test_shift_identities(label):
    for i in range(16):
        lhs, rhs = shift_identity_lhs(label, i, 15), shift_identity_rhs(label, i, 15)
        assert first_mismatch(lhs, rhs, 15) is None
        assert shift_identity_poly(label, i, "lhs") == shift_identity_poly(label, i, "rhs")


def test_shift_identity_direct_expansion():
    # (-q^{-2}; q)_inf expanded factor by factor
    direct = oracle.poch(-1, -2, 1, None, 20)
    assert oracle.as_dict(shift_identity_lhs("finite-3", 2, 20), 20) == direct
    assert oracle.as_dict(shift_identity_rhs("finite-3", 2, 20), 20) == direct
