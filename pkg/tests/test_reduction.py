"""Auxiliary multi-sums, rank reduction and theta recombinations."""

import math
from fractions import Fraction as F

import pytest

from nahmforge.nahm import NahmSpec, TadpoleSpec, chi, nahm_sum
from nahmforge.products import theta0, theta1
from nahmforge.reduction import (
    CHI3_CASES,
    CHI4_CASES,
    CHI5_CASES,
    FINITE_SUM_IDS,
    FamilyIndex,
    RankReductionInstance,
    ReductionError,
    chi3_theta_rhs,
    chi4_tadpole,
    chi4_theta_rhs,
    chi5_tadpole,
    chi5_theta_rhs,
    family_sum,
    finite_sum_length,
    finite_sum_lhs,
    finite_sum_rhs,
    reduce_even_rhs,
    reduce_odd_rhs,
    rogers_sum,
    s_scaling,
)
from nahmforge.series import first_mismatch

import oracle


def test_family_examples():
    g1 = family_sum(FamilyIndex("G", 1), 3)
    assert g1.coefficient(0) == 1 and g1.coefficient(1) == 2
    assert family_sum(FamilyIndex("H", 1, 0), 3).coefficient(2) == 2


def test_family_index_validation():
    for bad in [("G", 5, None), ("Z", 0, None), ("H", 4, 0), ("Zsplit", 1, None), ("Z", 1, 0), ("Q", 1, None)]:
        with pytest.raises((ReductionError, ValueError)):
            FamilyIndex(*bad)


@pytest.mark.parametrize("k", range(1, 6))
def test_z_parity_recombination(k):
    N = 30
    z = family_sum(FamilyIndex("Z", k), N)
    zm = z.negate_q()
    z0 = family_sum(FamilyIndex("Zsplit", k, 0), N)
    z1 = family_sum(FamilyIndex("Zsplit", k, 1), N)
    assert first_mismatch(z0, (z + zm).scale(F(1, 2)), N) is None
    assert first_mismatch(z1, (z - zm).scale(F(1, 2)), N) is None


def test_g4_relations():
    N = 40
    assert first_mismatch(family_sum(FamilyIndex("G", 4, 0), N), family_sum(FamilyIndex("G", 1, 0), N), N) is None
    assert first_mismatch(
        family_sum(FamilyIndex("G", 4, 1), N), family_sum(FamilyIndex("G", 1, 1), N).scale(-1), N
    ) is None
    assert first_mismatch(family_sum(FamilyIndex("Gt", 4), N), family_sum(FamilyIndex("Gt", 1), N), N) is None


def test_twisted_h_byproduct():
    N = 40
    h = family_sum(FamilyIndex("H", 1, 0), N)
    assert all(e % 2 == 0 for e, _ in h.items())
    ht = family_sum(FamilyIndex("Ht", 1, 0), N)
    assert first_mismatch(ht, h.twist_i(0), N) is None


@pytest.mark.parametrize("e", [(0, 0, 0, 0), (0, -1, 1, 0), (1, -1, 1, F(-1, 2)), (2, -2, 2, 1)])
def test_even_reduction_rank4(e):
    inst = RankReductionInstance("even", 2, e)
    N = 12
    assert first_mismatch(reduce_even_rhs(inst, N), chi(inst.tadpole(), N), N) is None


def test_even_reduction_base_and_rank6():
    inst = RankReductionInstance("even", 2, (2, -2, 2, 0), 2)
    assert first_mismatch(reduce_even_rhs(inst, 16), chi(inst.tadpole(), 16), 16) is None
    inst6 = RankReductionInstance("even", 3)
    assert first_mismatch(reduce_even_rhs(inst6, 8), chi(inst6.tadpole(), 8), 8) is None
    assert reduce_even_rhs(inst6, F(1, 3)).terms == {0: 1}


@pytest.mark.parametrize("ac", CHI3_CASES)
def test_odd_reduction_rank3(ac):
    a, c = ac
    inst = RankReductionInstance("odd", 1, (a, -a, c))
    assert first_mismatch(reduce_odd_rhs(inst, 15), chi(inst.tadpole(), 15), 15) is None


def test_odd_reduction_rank5_base4():
    inst = RankReductionInstance("odd", 2, (0, 0, 0, 0, 0), 4)
    assert first_mismatch(reduce_odd_rhs(inst, 24), chi(inst.tadpole(), 24), 24) is None


def test_reduction_constraints():
    with pytest.raises(ReductionError):
        RankReductionInstance("even", 2, (0, 1, 0, 0))
    with pytest.raises(ReductionError):
        RankReductionInstance("odd", 1, (1, 1, 0))
    with pytest.raises(ReductionError):
        RankReductionInstance("even", 2, (0, 0, 0))


def test_reduction_slack_is_sound():
    inst = RankReductionInstance("even", 2, (1, -1, 1, F(-1, 2)))
    assert reduce_even_rhs(inst, 10) == reduce_even_rhs(inst, 10, slack=2)
    inst = RankReductionInstance("odd", 1, (1, -1, F(1, 2)))
    assert reduce_odd_rhs(inst, 10) == reduce_odd_rhs(inst, 10, slack=2)


# raw displays: (exponent coefficients of n, r; alternating) as printed
RAW = {
    "1": (F(1, 2), 0, True), "2": (F(1, 2), 0, True), "3": (F(1, 2), 0, False), "4": (F(1, 2), 0, False),
    "5": (0, 0, True), "6": (0, 0, True), "6-add": (0, 0, False), "7": (0, 0, False),
    "8": (F(-1, 2), F(1, 2), True), "9": (F(-1, 2), 0, True), "10": (F(-1, 2), 0, True), "11": (F(-1, 2), 0, False),
}


@pytest.mark.parametrize("label", FINITE_SUM_IDS)
def test_finite_sums_exact(label):
    for i in range(16):
        assert finite_sum_lhs(label, i) == finite_sum_rhs(label, i)


@pytest.mark.parametrize("label", FINITE_SUM_IDS)
def test_finite_sums_against_raw_display(label):
    """Normalised sides times 1/(q;q)_N equal the double sum as printed."""
    M = 8
    a, b, alt = RAW[label]
    for i in range(4):
        N = finite_sum_length(label, i)
        raw = {}
        for n in range(N + 1):
            r = N - n
            e = F(-n * r, 2) + a * n + b * r
            W = math.ceil(M - e)
            den = oracle.mul(oracle.qpoch_q(n, W), oracle.qpoch_q(r, W), W)
            term = oracle.shift(oracle.inverse(den, W), e)
            raw = oracle.add(raw, oracle.scale(term, (-1) ** n if alt else 1))
        inv = oracle.inverse(oracle.qpoch_q(N, M + 20), M + 20)
        rhs = oracle.mul(finite_sum_rhs(label, i).terms, inv, M)
        assert {e: c for e, c in raw.items() if e < M} == rhs


def test_finite_sum_examples():
    assert finite_sum_rhs("1", 0).terms == {0: 1}
    assert finite_sum_rhs("1", 3).is_zero()
    with pytest.raises(ValueError):
        finite_sum_lhs("99", 0)


@pytest.mark.parametrize("case", sorted(CHI4_CASES))
def test_chi4_theta_recombination(case):
    N = 40
    assert first_mismatch(chi4_theta_rhs(case, N), chi(chi4_tadpole(case), N), N) is None


@pytest.mark.parametrize("abc", CHI5_CASES)
def test_chi5_theta_recombination(abc):
    N = 30
    assert first_mismatch(chi5_theta_rhs(*abc, N), chi(chi5_tadpole(*abc), N), N) is None


def test_s_scaling():
    N = 30
    h = F(1, 2)
    two_s = chi(chi5_tadpole(1, 1, h), N).scale(2)
    assert first_mismatch(s_scaling(-1, -1, -h, 1, 1, h, N), two_s, N) is None
    same = s_scaling(0, 0, 0, 0, 0, 0, N)
    assert first_mismatch(same, chi(chi5_tadpole(0, 0, 0), N), N) is None
    with pytest.raises((ReductionError, ValueError)):
        s_scaling(0, 0, 0, 1, 0, 0, N)


@pytest.mark.parametrize("ac", CHI3_CASES)
def test_chi3_theta(ac):
    a, c = ac
    N = 30
    assert first_mismatch(chi3_theta_rhs(a, c, N), chi(TadpoleSpec(3, (a, -a, c)), N), N) is None


def test_chi3_rejects_other_pairs():
    with pytest.raises((ReductionError, ValueError)):
        chi3_theta_rhs(0, F(1, 4), 10)


def test_rogers_sums_split_by_parity():
    # the two parity classes of sum q^{n^2/4 + d n}/(q;q)_n add up to the full sum
    N = 20
    for d in (0, F(1, 2)):
        total = rogers_sum(d, 0, N) + rogers_sum(d, 1, N)
        full = nahm_sum(NahmSpec(((F(1, 2),),), (d,)), N)
        assert first_mismatch(total, full, N) is None


def test_theta_parts_are_supported_on_classes():
    assert all(e % 8 == 0 or e % 8 == 4 for e, _ in theta0(50).items())
    assert all(e % 8 == 1 for e, _ in theta1(50).items())
