"""The built-in identity catalog and the verification engine.

Each :class:`IdentityRecord` pairs two :class:`~nahmforge.expr.Expr` trees.
Fixed identities are stored as records; families with integer parameters
(``AG(k,s)``, the finite sums ``finite-sum-<label>(i)`` and the shift
identities ``finite-<label>(i)``) are stored as generators that build a record
on demand and expand over a default parameter range when listed.

Rows of the two tables of modularity constants are carried as metadata-only
records: they have no sides and are never verified.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .expr import (
    Add,
    ChiE,
    Chi3ThetaE,
    Chi4ThetaE,
    Chi5ThetaE,
    Const,
    Expr,
    ExprError,
    FamilyE,
    FiniteSumE,
    LatticeE,
    NahmE,
    NegateQ,
    NewRepnE,
    PhiE,
    PsiE,
    QBinomE,
    QPow,
    ReduceEvenE,
    ReduceOddE,
    SScalingE,
    ShiftIdE,
    Theta0E,
    Theta1E,
    ThetaE,
    TwistI,
    evaluate,
    from_json,
    jquot,
    poch,
    prod,
    to_json,
)
from .lattice import Factor, LatticeSum, qpoch_inverse
from .nahm import NahmSpec, TadpoleSpec
from .products import ThetaSpec
from .reduction import (
    ALPHA,
    A_Z,
    CHI3_CASES,
    CHI5_CASES,
    FINITE_SUM_IDS,
    SHIFT_IDENTITIES,
    FamilyIndex,
    RankReductionInstance,
    chi4_tadpole,
    chi5_tadpole,
)
from .series import INF, as_accuracy, as_rational, first_mismatch, format_rational

F = Fraction
STATUSES = ("theorem", "conjecture", "known-classical")
OUTCOMES = ("match", "mismatch", "accuracy-insufficient")
EXACT_ORDER = F(10**6)


class CatalogError(ValueError):
    """Unknown identity, malformed overlay or invalid filter."""


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    paper_label: str
    status: str
    default_order: Fraction
    lhs: Optional[Expr] = None
    rhs: Optional[Expr] = None
    family: str = ""
    params: tuple = ()
    metadata: tuple = ()
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise CatalogError(f"status must be one of {STATUSES}")
        object.__setattr__(self, "default_order", as_accuracy(self.default_order))
        if (self.lhs is None) != (self.rhs is None):
            raise CatalogError("an identity needs both sides or neither")

    @property
    def metadata_only(self) -> bool:
        return self.lhs is None

    def summary(self) -> dict:
        out = {
            "id": self.id,
            "paper_label": self.paper_label,
            "status": self.status,
            "family": self.family,
            "default_order": format_rational(self.default_order),
            "metadata_only": self.metadata_only,
        }
        if self.metadata:
            out["metadata"] = {k: v for k, v in self.metadata}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class VerificationReport:
    id: str
    paper_label: str
    status: str
    order_checked: Fraction
    outcome: str
    mismatch_detail: Optional[tuple] = None
    elapsed: float = 0.0

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"outcome must be one of {OUTCOMES}")
        if (self.outcome == "mismatch") != (self.mismatch_detail is not None):
            raise ValueError("a mismatch needs its detail and only a mismatch has one")

    @property
    def ok(self) -> bool:
        return self.outcome == "match"

    @property
    def label(self) -> str:
        """Human-readable verdict; conjectures are never called proved."""
        order = format_rational(self.order_checked)
        if self.status == "conjecture":
            if self.outcome == "match":
                return f"conjecture-verified-to-order {order}"
            if self.outcome == "mismatch":
                return f"conjecture-falsified-at-order {format_rational(self.mismatch_detail[0])}"
        return {"match": "match", "mismatch": "mismatch"}.get(self.outcome, self.outcome)

    def to_json(self) -> dict:
        mm = None
        if self.mismatch_detail is not None:
            e, a, b = self.mismatch_detail
            mm = {"exponent": format_rational(e), "lhs": format_rational(a), "rhs": format_rational(b)}
        return {
            "id": self.id,
            "paper_label": self.paper_label,
            "status": self.status,
            "order_checked": format_rational(self.order_checked),
            "outcome": self.outcome,
            "mismatch": mm,
            "elapsed_s": round(self.elapsed, 6),
        }


@dataclass(frozen=True)
class Generator:
    """A parameterised family of records, e.g. ``AG(k,s)``."""

    name: str
    family: str
    arity: int
    build: Callable[..., IdentityRecord]
    valid: Callable[..., bool]
    listing: Callable[[], Iterable[tuple]]

    def id_for(self, *params) -> str:
        return f"{self.name}({','.join(str(p) for p in params)})"


# ----------------------------------------------------------------------
# building blocks


def _fac(sign, offset, step, power=1, index=(1,), const=0) -> Factor:
    return Factor(sign, offset, step, power, index, const)


def single_sum(quad=0, lin=0, const=0, factors=(), sign=False, parity=None) -> LatticeE:
    """``sum_{n>=0} (+-1)^n q^{quad n^2 + lin n + const} prod factors(n)``."""
    quad, lin = as_rational(quad), as_rational(lin)
    parities = () if parity is None else (((1,), parity),)
    if quad:
        data = LatticeSum(((2 * quad,),), (lin,), const, (0,), tuple(factors), parities, (int(sign),))
    else:
        data = LatticeSum((), (lin,), const, (0,), tuple(factors), parities, (int(sign),))
    return LatticeE(data)


def _p(sign, offset, step=1):
    return poch(sign, offset, step)


def _pp(step, *offsets, sign=1):
    """``(sign q^{o_1}, ..., sign q^{o_m}; q^step)_inf``."""
    return prod(*[_p(sign, o, step) for o in offsets])


def _fmt_vec(v) -> str:
    return "(" + ",".join(format_rational(as_rational(x)) for x in v) + ")"


HALF = F(1, 2)


# ----------------------------------------------------------------------
# record tables


def _classical() -> list[IdentityRecord]:
    recs = []
    for a in (0, 1):
        recs.append(
            IdentityRecord(
                f"RR-a{a}", "RR", "known-classical", 200,
                NahmE(NahmSpec(((2,),), (a,))),
                1 / (_p(1, a + 1, 5) * _p(1, 4 - a, 5)),
                family="classical",
            )
        )
        recs.append(
            IdentityRecord(
                f"Rogers-a{a}", "Rogers-id", "known-classical", 200,
                NahmE(NahmSpec(((HALF,),), (F(a, 2),), 0, 4)),
                1 / (_p(-1, 2, 2) * _p(1, a + 1, 5) * _p(1, 4 - a, 5)),
                family="classical",
            )
        )
    for sign, beta in ((1, 1), (-1, 1), (1, HALF), (-1, HALF)):
        z = ("" if sign == 1 else "-") + f"q^{format_rational(beta)}"
        recs.append(
            IdentityRecord(
                f"euler-2[z={z}]", "euler-2", "known-classical", 200,
                single_sum(HALF, beta - HALF, 0, [qpoch_inverse(1, (1,))], sign == -1),
                _p(-sign, beta),
                family="classical",
            )
        )
        recs.append(
            IdentityRecord(
                f"euler[z={z}]", "euler", "known-classical", 200,
                single_sum(0, beta, 0, [qpoch_inverse(1, (1,))], sign == -1),
                1 / _p(sign, beta),
                family="classical",
            )
        )
    for sign, off in ((1, 0), (-1, 0), (1, HALF), (-1, HALF), (1, F(1, 3)), (1, F(-3, 2))):
        z = ("" if sign == 1 else "-") + f"q^{format_rational(off)}"
        rhs = prod(_p(-sign, HALF + off), _p(-sign, HALF - off), _p(1, 1))
        recs.append(
            IdentityRecord(
                f"JTP[z={z}]", "JTP", "known-classical", 200,
                ThetaE(ThetaSpec(sign, off, 1)), rhs, family="classical",
            )
        )
    recs += [
        IdentityRecord("phi-product", "eq-psi", "known-classical", 200, PhiE(), jquot({2: 5}, {1: 2, 4: 2}), family="classical"),
        IdentityRecord("psi-product", "eq-psi", "known-classical", 200, PsiE(), jquot({2: 2}, {1: 1}), family="classical"),
        IdentityRecord("theta0-product", "theta0-defn", "known-classical", 200, Theta0E(), jquot({8: 5}, {4: 2, 16: 2}), family="classical"),
        IdentityRecord("theta1-product", "theta1-defn", "known-classical", 200, Theta1E(), jquot({16: 2}, {8: 1}, 2, 1), family="classical"),
        IdentityRecord("theta-split", "theta0-defn", "known-classical", 200, Theta0E() + Theta1E(), PhiE(), family="classical"),
    ]
    recs += _rank_one() + _qbinomial()
    return recs


def _rogers_quarter(d) -> Expr:
    """Product side of ``sum_n q^{n^2/4 + d n}/(q;q)_n`` for ``d`` in {0, 1/2}."""
    if d == 0:
        p = _pp(10, 2, 8, 10) * _pp(20, 6, 14) + prod(QPow(F(1, 4)), _pp(10, 3, 7, 10) * _pp(20, 4, 16))
    else:
        p = _pp(10, 1, 9, 10) * _pp(20, 8, 12) + prod(QPow(F(3, 4)), _pp(10, 4, 6, 10) * _pp(20, 2, 18))
    return p / _p(1, 1, 1)


def _rank_one() -> list[IdentityRecord]:
    """The seven rank one modular triples, each with its product form."""
    rows = [
        (HALF, 0, _rogers_quarter(0)),
        (HALF, HALF, _rogers_quarter(HALF)),
        (1, 0, _p(-1, HALF)),
        (1, HALF, _p(-1, 1)),
        (1, -HALF, 2 * _p(-1, 1)),
        (2, 0, 1 / (_p(1, 1, 5) * _p(1, 4, 5))),
        (2, 1, 1 / (_p(1, 2, 5) * _p(1, 3, 5))),
    ]
    return [
        IdentityRecord(f"rank1-triple({format_rational(A)},{format_rational(B)})", "eq-triple", "known-classical", 200,
                       NahmE(NahmSpec(((A,),), (B,))), rhs, family="classical")
        for A, B, rhs in rows
    ]


def _qbinomial() -> list[IdentityRecord]:
    inv1 = qpoch_inverse(1, (1,))
    recs = [
        # a = -q, z = q
        IdentityRecord("qbi[a=-q,z=q]", "qbi", "known-classical", 200,
                       single_sum(0, 1, 0, [_fac(-1, 1, 1), inv1]), _p(-1, 2) / _p(1, 1), family="classical"),
        # a = q^{1/2}, z = -q^{1/2}
        IdentityRecord("qbi[a=q^1/2,z=-q^1/2]", "qbi", "known-classical", 200,
                       single_sum(0, HALF, 0, [_fac(1, HALF, 1), inv1], True), _p(-1, 1) / _p(-1, HALF),
                       family="classical"),
        # a = q, b = -q^{1/2}, c = q^2, t = q; the (q;q)_n factors cancel on both sides
        IdentityRecord("Heine[a=q,b=-q^1/2,c=q^2,t=q]", "Heine", "known-classical", 200,
                       single_sum(0, 1, 0, [_fac(-1, HALF, 1), _fac(1, 2, 1, -1)]),
                       _p(-1, HALF) / _p(1, 1)
                       * single_sum(0, HALF, 0, [_fac(-1, F(3, 2), 1), _fac(1, 2, 1, -1)], True),
                       family="classical"),
    ]
    n = 8
    for sign, beta in ((1, 1), (-1, HALF), (1, -2)):
        z = ("" if sign == 1 else "-") + f"q^{format_rational(beta)}"
        terms = [
            prod(Const(sign ** i), QPow(F(i * (i - 1), 2) + beta * i), QBinomE(n, i)) for i in range(n + 1)
        ]
        recs.append(IdentityRecord(f"eq-finite[n={n},z={z}]", "eq-finite", "known-classical", EXACT_ORDER,
                                   Add(tuple(terms)), poch(-sign, beta, 1, n), family="classical"))
    return recs


def _slater() -> list[IdentityRecord]:
    inv4 = qpoch_inverse(4, (1,))
    m_q2 = lambda c=0: _fac(-1, 1, 2, 1, (1,), c)  # (-q;q^2)_{n+c}  # noqa: E731
    m_q22 = _fac(-1, 2, 2)  # (-q^2;q^2)_n
    inv_q_2n1 = _fac(1, 1, 1, -1, (2,), 1)  # 1/(q;q)_{2n+1}
    inv_q_2n = _fac(1, 1, 1, -1, (2,), 0)
    inv_q2_2n1 = _fac(1, 2, 2, -1, (2,), 1)
    inv_q2_2n = _fac(1, 2, 2, -1, (2,), 0)
    rows = [
        ("S.25", "S.25", single_sum(1, 0, 0, [m_q2(), inv4]), jquot({2: 1, 3: 2}, {1: 1, 4: 1, 6: 1})),
        ("Ramanujan-4.2.11", "Ramanujan[10 Entry4.2.11]", single_sum(1, 2, 0, [m_q2(), inv4]), jquot({6: 2}, {3: 1, 4: 1})),
        ("S.28", "S.28", single_sum(1, 1, 0, [m_q22, inv_q_2n1]), jquot({3: 1, 12: 1}, {1: 1, 6: 1})),
        ("S.29", "S.29", single_sum(1, 0, 0, [m_q2(), inv_q_2n]), jquot({6: 2}, {1: 1, 12: 1})),
        ("S.50", "S.50", single_sum(1, 2, 0, [m_q2(), inv_q_2n1]), jquot({2: 1, 12: 2}, {1: 1, 4: 1, 6: 1})),
        ("S.80", "S.80", single_sum(1, 1, 0, [m_q22, inv_q2_2n1]), jquot({4: 1, (4, 14): 1, (6, 28): 1}, {2: 2, 28: 1})),
        ("S.81", "S.81", single_sum(1, 1, 0, [m_q22, inv_q2_2n]), jquot({4: 1, (2, 14): 1, (10, 28): 1}, {2: 2, 28: 1})),
        ("S.82", "S.82", single_sum(1, 3, 0, [m_q22, inv_q2_2n1]), jquot({4: 1, (6, 14): 1, (2, 28): 1}, {2: 2, 28: 1})),
        ("S.117", "S.117", single_sum(1, 0, 0, [m_q2(), inv_q2_2n]), jquot({2: 1, (3, 14): 1, (8, 28): 1}, {1: 1, 4: 1, 28: 1})),
        ("S.118", "S.118", single_sum(1, 2, 0, [m_q2(), inv_q2_2n]), jquot({2: 1, (1, 14): 1, (12, 28): 1}, {1: 1, 4: 1, 28: 1})),
        ("S.119", "S.119", single_sum(1, 2, 0, [m_q2(1), inv_q2_2n1]), jquot({2: 1, (5, 14): 1, (4, 28): 1}, {1: 1, 4: 1, 28: 1})),
    ]
    return [IdentityRecord(i, lab, "known-classical", 200, l, r, family="slater") for i, lab, l, r in rows]


def _heine() -> list[IdentityRecord]:
    a = lambda s, o, c=0: _fac(s, o, 2, 1, (1,), c)  # (s q^o; q^2)_{n+c}  # noqa: E731
    inv_2n1 = _fac(1, 2, 2, -1, (2,), 1)
    inv_2n = _fac(1, 2, 2, -1, (2,), 0)
    rows = [
        ("G11", single_sum(0, 1, 0, [a(1, 1), a(-1, 2), a(1, 1, 1), inv_2n1], True), jquot({1: 2, 4: 2, 6: 2}, {2: 5, 3: 1})),
        ("wG10", single_sum(0, 1, 0, [a(-1, 0), a(1, 1), a(-1, 2), inv_2n], True), jquot({1: 2, 4: 2, 6: 2}, {2: 5, 12: 1})),
        ("G20", single_sum(0, 1, 0, [a(-1, 2), _fac(1, 1, 2, 2), inv_2n], True), jquot({1: 1, 3: 2, 4: 2}, {2: 4, 6: 1})),
        ("wG21", single_sum(0, 1, 0, [a(1, 1, 1), _fac(-1, 2, 2, 2), inv_2n1], True), jquot({1: 2, 4: 1, 12: 2}, {2: 4, 6: 1})),
        ("G3", single_sum(0, 2, 0, [a(1, 1), _fac(-1, 1, 2, 2), inv_2n], True), jquot({2: 1, 3: 1, 12: 1}, {4: 2, 6: 1})),
    ]
    return [IdentityRecord(i, i, "theorem", 200, l, r, family="heine") for i, l, r in rows]


def _G(k, p=None, fam="G"):
    return FamilyE(FamilyIndex(fam, k, p))


def _lemma_g() -> list[IdentityRecord]:
    a = jquot({4: 2}, {2: 1, 8: 1})
    b = jquot({2: 2, 8: 3, 12: 2}, {4: 6, 6: 1}, 2, 1)
    wg1 = jquot({2: 3, 8: 2, 12: 2}, {4: 6, 24: 1})
    rows = [
        ("eq-G1", _G(1), a + b),
        ("eq-wG1", _G(1, fam="Gt"), wg1),
        ("eq-G2", _G(2), jquot({2: 1, 6: 2, 8: 3}, {4: 5, 12: 1}, 2)),
        ("eq-wG2", _G(2, fam="Gt"), jquot({2: 3, 8: 1, 24: 2}, {4: 5, 12: 1}, -2, 1)),
        ("eq-G3", _G(3), jquot({4: 3, 12: 2}, {2: 1, 6: 1, 8: 3})),
        ("eq-wG3", _G(3, fam="Gt"), jquot({2: 1, 6: 1, 24: 1}, {8: 2, 12: 1})),
        ("eq-G4", _G(4), a - b),
        ("eq-wG4", _G(4, fam="Gt"), wg1),
    ]
    recs = [IdentityRecord(i, i, "theorem", 120, l, r, family="G") for i, l, r in rows]

    f4 = lambda s, o, c=0, pw=1: _fac(s, o, 4, pw, (1,), c)  # (s q^o; q^4)_{n+c}^pw  # noqa: E731
    inv_2n1 = _fac(1, 4, 4, -1, (2,), 1)
    inv_2n = _fac(1, 4, 4, -1, (2,), 0)
    zero = Const(0)
    mids = [
        ("G10-exp", _G(1, 0), _p(-1, 2, 4)),
        ("G11-exp", _G(1, 1), prod(2, QPow(1), _p(-1, 4, 4),
                                  single_sum(0, 2, 0, [f4(1, 2), f4(1, 2, 1), f4(-1, 4), inv_2n1], True))),
        ("wG10-exp", _G(1, 0, "Gt"), prod(_p(1, 2, 4),
                                        single_sum(0, 2, 0, [f4(-1, 0), f4(1, 2), f4(-1, 4), inv_2n], True))),
        ("wG11-exp", _G(1, 1, "Gt"), zero),
        ("G20-exp", _G(2, 0), prod(2, _p(-1, 4, 4), single_sum(0, 2, 0, [f4(-1, 4), f4(1, 2, 0, 2), inv_2n], True))),
        ("G21-exp", _G(2, 1), zero),
        ("wG20-exp", _G(2, 0, "Gt"), zero),
        ("wG21-exp", _G(2, 1, "Gt"), prod(-2, QPow(1), _p(1, 2, 4),
                                         single_sum(0, 2, 0, [f4(1, 2, 1), f4(-1, 4, 0, 2), inv_2n1], True))),
        ("G30-exp", _G(3, 0), prod(_p(-1, 2, 4), single_sum(0, 4, 0, [f4(-1, 2), f4(1, 2, 0, 2), inv_2n], True))),
        ("G31-exp", _G(3, 1), zero),
        ("wG30-exp", _G(3, 0, "Gt"), prod(_p(1, 2, 4), single_sum(0, 4, 0, [f4(1, 2), f4(-1, 2, 0, 2), inv_2n], True))),
        ("wG31-exp", _G(3, 1, "Gt"), zero),
        ("G40-exp", _G(4, 0), _G(1, 0)),
        ("G41-exp", _G(4, 1), -b),
    ]
    recs += [IdentityRecord(i, i, "theorem", 120, l, r, family="G") for i, l, r in mids]
    recs.append(IdentityRecord("G41-rel", "G41-exp", "theorem", 120, _G(4, 1), -_G(1, 1), family="G"))
    recs.append(IdentityRecord("wG4-rel", "eq-wG4", "theorem", 120, _G(4, fam="Gt"), _G(1, fam="Gt"), family="G"))
    for k in range(1, 5):
        for i in (0, 1):
            half_sum = Const(HALF) * (_G(k) + (_G(k, fam="Gt") if i == 0 else -_G(k, fam="Gt")))
            recs.append(IdentityRecord(f"L{k}{i}-split", "lem-G", "theorem", 120, _G(k, i, "L"), half_sum, family="G"))
    return recs


def _z() -> list[IdentityRecord]:
    rhs = {
        1: jquot({6: 1, 12: 1}, {3: 1, 8: 1}) / _pp(12, 1, 11),
        2: jquot({12: 1}, {8: 1}) / (_pp(12, 1, 11) * _pp(12, 5, 7)),
        3: jquot({6: 5, 8: 1}, {3: 2, 4: 2, 12: 2}),
        4: jquot({6: 1, 12: 1}, {3: 1, 8: 1}) / _pp(12, 5, 7),
        5: prod(jquot({6: 1, 8: 1}, {4: 2}), _pp(12, 2, 10)) / (_pp(12, 1, 11) * _pp(12, 5, 7)),
    }
    recs = []
    for k in range(1, 6):
        lhs = NahmE(NahmSpec(A_Z, ALPHA[k], 0, 4))
        status = "conjecture" if k == 5 else "theorem"
        recs.append(IdentityRecord(f"dZ{k}", f"dZ{k}", status, 300 if k == 5 else 120, lhs, rhs[k], family="dZ"))
    for k in range(1, 6):
        z = FamilyE(FamilyIndex("Z", k))
        for i in (0, 1):
            other = NegateQ(z)
            r = Const(HALF) * (z + other if i == 0 else z - other)
            recs.append(IdentityRecord(f"Z{k}{i}-exp", "Zk01-exp", "theorem", 120,
                                       FamilyE(FamilyIndex("Zsplit", k, i)), r, family="dZ"))
    for k in range(1, 5):
        gp, gm = _G(k) + _G(k, fam="Gt"), _G(k) - _G(k, fam="Gt")
        t0, t1 = (Theta0E(), Theta1E()) if k < 4 else (Theta1E(), Theta0E())
        pre = prod(Const(HALF), QPow(-1 if k == 4 else 0)) / _p(1, 4, 4)
        r = pre * (gp * t0 + gm * t1)
        label = "Z456-split" if k == 4 else "Z123-split"
        recs.append(IdentityRecord(f"Z{k}-split", label, "theorem", 120, FamilyE(FamilyIndex("Z", k)), r, family="dZ"))
    return recs


def _rank4() -> list[IdentityRecord]:
    pre1 = _p(-1, 1, 2) / _p(1, 2, 2)
    rhs = {
        1: pre1 * (jquot({4: 5, 12: 1, (4, 24): 1, (10, 24): 1}, {1: 1, 2: 2, 8: 2, 24: 2})
                   + jquot({8: 2, 12: 1, (5, 12): 1, (2, 24): 2, (10, 24): 1}, {1: 1, 4: 1, (1, 12): 1, (4, 24): 1, 24: 2}, 2, 1)),
        2: pre1 * (jquot({4: 5, 24: 3}, {1: 1, 2: 1, 8: 3, (2, 24): 1, (10, 24): 1})
                   + jquot({2: 1, 8: 1, 24: 3}, {1: 1, 4: 1, (4, 24): 2}, 2)),
        3: (_p(-1, 2, 2) / _p(1, 2, 2)) * (jquot({4: 5, 12: 6}, {2: 3, 6: 3, 8: 2, (2, 24): 1, (10, 24): 1})
                                           + jquot({8: 2, 24: 4}, {2: 1, 4: 1, 6: 1, (2, 24): 1, (10, 24): 1}, 4, 2)),
        4: pre1 * (jquot({4: 5, 24: 3}, {1: 1, 2: 1, 8: 3, (6, 24): 1, (10, 24): 1}, 1, 1)
                   + jquot({8: 3, 12: 3, 24: 2, (10, 24): 1}, {3: 1, 4: 3, (5, 24): 2, (7, 24): 2}, 2)),
        5: (_p(-1, 0, 2) / _p(1, 2, 2)) * (jquot({4: 5, 12: 2, 24: 7}, {2: 2, 6: 2, 8: 3, (2, 24): 3, (10, 24): 3})
                                           + jquot({8: 3, 12: 2}, {2: 2, 4: 1, 24: 1}, 2)),
    }
    recs = []
    for c in range(1, 6):
        recs.append(IdentityRecord(f"eq-4-{c}", f"eq-4-{c}", "theorem", 120, ChiE(chi4_tadpole(c, 2)), rhs[c], family="rank4"))
        recs.append(IdentityRecord(f"chi4-{c}-final", f"chi4-{c}-final", "theorem", 120,
                                   ChiE(chi4_tadpole(c)), Chi4ThetaE(c), family="rank4"))
    return recs


def _rank5() -> list[IdentityRecord]:
    def hp(k, i, fam="H"):
        return FamilyE(FamilyIndex(fam, k, i))

    den = 1 / _p(1, 4, 4)
    m2 = _p(-1, 2, 4) ** 2
    m4 = _p(-1, 4, 4) ** 2
    p2 = _p(1, 2, 4) ** 2
    prods = [
        ("H10-product", hp(1, 0), prod(m2, _pp(28, 6, 22, 28), _pp(56, 16, 40), den)),
        ("H11-product", hp(1, 1), prod(2, QPow(1), m4, _pp(28, 8, 20, 28), _pp(56, 12, 44), den)),
        ("H20-product", hp(2, 0), prod(m2, _pp(28, 2, 26, 28), _pp(56, 24, 32), den)),
        ("H21-product", hp(2, 1), prod(2, QPow(3), m4, _pp(28, 12, 16, 28), _pp(56, 4, 52), den)),
        ("H30-product", hp(3, 0), prod(2, m4, _pp(28, 4, 24, 28), _pp(56, 20, 36), den)),
        ("H31-product", hp(3, 1), prod(QPow(1), m2, _pp(28, 10, 18, 28), _pp(56, 8, 48), den)),
        ("wH10-product", hp(1, 0, "Ht"), prod(p2, _p(-1, 6, 28), _p(-1, 22, 28), _p(1, 28, 28), _pp(56, 16, 40), den)),
        ("wH20-product", hp(2, 0, "Ht"), prod(p2, _p(-1, 2, 28), _p(-1, 26, 28), _p(1, 28, 28), _pp(56, 24, 32), den)),
        ("wH31-product", hp(3, 1, "Ht"), prod(-1, QPow(1), p2, _p(-1, 10, 28), _p(-1, 18, 28), _p(1, 28, 28), _pp(56, 8, 48), den)),
    ]
    recs = [IdentityRecord(i, i, "theorem", 120, l, r, family="H") for i, l, r in prods]
    recs += [
        IdentityRecord("wH10-twist", "wH10-product", "theorem", 120, hp(1, 0, "Ht"), TwistI(hp(1, 0), 0), family="H"),
        IdentityRecord("wH20-twist", "wH20-product", "theorem", 120, hp(2, 0, "Ht"), TwistI(hp(2, 0), 0), family="H"),
        IdentityRecord("wH31-twist", "wH31-product", "theorem", 120, hp(3, 1, "Ht"), TwistI(hp(3, 1), 1), family="H"),
    ]
    f4 = lambda s, o, c=0: _fac(s, o, 4, 1, (1,), c)  # noqa: E731
    inv_2n = _fac(1, 4, 4, -1, (2,), 0)
    inv_2n1 = _fac(1, 4, 4, -1, (2,), 1)
    mids = [
        ("H10-mid", hp(1, 0), _p(-1, 2, 4) * single_sum(2, 0, 0, [f4(-1, 2), inv_2n])),
        ("H11-mid", hp(1, 1), _p(-1, 0, 4) * single_sum(2, 2, 1, [f4(-1, 4), inv_2n1])),
        ("H20-mid", hp(2, 0), _p(-1, 2, 4) * single_sum(2, 4, 0, [f4(-1, 2), inv_2n])),
        ("H21-mid", hp(2, 1), _p(-1, 0, 4) * single_sum(2, 6, 3, [f4(-1, 4), inv_2n1])),
        ("H30-mid", hp(3, 0), _p(-1, 0, 4) * single_sum(2, 2, 0, [f4(-1, 4), inv_2n])),
        ("H31-mid", hp(3, 1), _p(-1, 2, 4) * single_sum(2, 4, 1, [f4(-1, 2, 1), inv_2n1])),
    ]
    recs += [IdentityRecord(i, i, "theorem", 120, l, r, family="H") for i, l, r in mids]

    def S(a, b, c):
        return ChiE(chi5_tadpole(a, b, c))

    def four(c4, q4, t4, c3, q3, t3, c2, q2, t2, c1, q1, t1):
        return Add(tuple(jquot(*t, c, q) for c, q, t in ((c4, q4, t4), (c3, q3, t3), (c2, q2, t2), (c1, q1, t1))))

    h = HALF
    thm = {
        (0, 0, F(0)): four(
            4, 2, ({8: 6, (8, 28): 1, (12, 56): 1}, {2: 1, 4: 5, 8: 1, 56: 1}),
            -2, 1, ({4: 1, 8: 1, (6, 28): 1, (16, 56): 1}, {2: 3, 56: 1}),
            h, 0, ({2: 7, (6, 28): 1, (16, 56): 1}, {1: 4, 4: 1, 8: 3, 56: 1}),
            h, 0, ({2: 5, 28: 2, (12, 56): 1, (16, 56): 1}, {4: 5, 8: 1, 56: 2, (6, 28): 1})),
        (1, 1, h): four(
            4, 0, ({8: 7, (8, 28): 1, (12, 56): 1}, {4: 8, 56: 1}),
            -2, -1, ({8: 3, (6, 28): 1, (16, 56): 1}, {2: 2, 4: 2, 56: 1}),
            h, -2, ({2: 8, (6, 28): 1, (16, 56): 1}, {1: 4, 4: 4, 8: 1, 56: 1}),
            -h, -2, ({2: 6, 8: 1, 28: 2, (12, 56): 1, (16, 56): 1}, {4: 8, 56: 2, (6, 28): 1})),
        (-1, -1, F(0)): four(
            4, 2, ({8: 5, (12, 28): 1, (4, 56): 1}, {2: 1, 4: 5, 56: 1}),
            -2, -1, ({4: 1, 8: 1, (2, 28): 1, (24, 56): 1}, {2: 3, 56: 1}),
            h, -2, ({2: 7, (2, 28): 1, (24, 56): 1}, {1: 4, 4: 1, 8: 3, 56: 1}),
            -h, -2, ({2: 5, 28: 2, (4, 56): 1, (24, 56): 1}, {4: 5, 8: 1, 56: 2, (2, 28): 1})),
        (0, 0, h): four(
            4, 4, ({8: 7, (12, 28): 1, (4, 56): 1}, {4: 8, 56: 1}),
            -2, 1, ({8: 3, (2, 28): 1, (24, 56): 1}, {2: 2, 4: 2, 56: 1}),
            h, 0, ({2: 8, (2, 28): 1, (24, 56): 1}, {1: 4, 4: 4, 8: 1, 56: 1}),
            h, 0, ({2: 6, 8: 1, 28: 2, (4, 56): 1, (24, 56): 1}, {4: 8, 56: 2, (2, 28): 1})),
        (0, -1, F(0)): four(
            4, 0, ({8: 5, (4, 28): 1, (20, 56): 1}, {2: 1, 4: 5, 56: 1}),
            -2, 1, ({4: 1, 8: 1, (10, 28): 1, (8, 56): 1}, {2: 3, 56: 1}),
            h, 0, ({2: 7, (10, 28): 1, (8, 56): 1}, {1: 4, 4: 1, 8: 3, 56: 1}),
            -h, 0, ({2: 5, 28: 2, (8, 56): 1, (20, 56): 1}, {4: 5, 8: 1, 56: 2, (10, 28): 1})),
        (1, 0, h): four(
            4, 0, ({8: 7, (4, 28): 1, (20, 56): 1}, {4: 8, 56: 1}),
            -2, 1, ({8: 3, (10, 28): 1, (8, 56): 1}, {2: 2, 4: 2, 56: 1}),
            h, 0, ({2: 8, (10, 28): 1, (8, 56): 1}, {1: 4, 4: 4, 8: 1, 56: 1}),
            h, 0, ({2: 6, 8: 1, 28: 2, (8, 56): 1, (20, 56): 1}, {4: 8, 56: 2, (10, 28): 1})),
    }
    labels = {(0, 0, F(0)): 1, (1, 1, h): 2, (-1, -1, F(0)): 4, (0, 0, h): 5, (0, -1, F(0)): 7, (1, 0, h): 8}
    proof_labels = {1: 1, 2: 2, 4: 4, 5: 5, 7: 7, 8: 8}
    for abc in CHI5_CASES:
        n = labels[abc]
        recs.append(IdentityRecord(f"eq-rank5-{n}", f"eq-rank5-{n}", "theorem", 100, S(*abc), thm[abc], family="rank5"))
        recs.append(IdentityRecord(f"proof-5-{proof_labels[n]}", f"proof-5-{proof_labels[n]}", "theorem", 100,
                                   S(*abc), Chi5ThetaE(*abc), family="rank5"))
    scal = [
        (3, (-1, -1, -h), (1, 1, h), prod(2)),
        (6, (-2, -2, -h), (0, 0, h), prod(2, QPow(-8))),
        (9, (-1, -2, -h), (1, 0, h), prod(2, QPow(-4))),
    ]
    for n, src, tgt, factor in scal:
        recs.append(IdentityRecord(f"eq-rank5-{n}", f"eq-rank5-{n}", "theorem", 100, S(*src), factor * S(*tgt), family="rank5"))
        recs.append(IdentityRecord(f"S-abc-relation{_fmt_vec(src)}", "S-abc-relation", "theorem", 100,
                                   S(*src), SScalingE(src, tgt), family="rank5"))
    return recs


def _rank3() -> list[IdentityRecord]:
    inv1 = qpoch_inverse(1, (1,))
    rog = [
        ("S79", 0, 0, 0, _pp(10, 2, 8, 10) * _pp(20, 6, 14)),
        ("S94", 0, 1, F(1, 4), _pp(10, 3, 7, 10) * _pp(20, 4, 16)),
        ("S99", HALF, 0, 0, _pp(10, 1, 9, 10) * _pp(20, 8, 12)),
        ("Rogers-1", HALF, 1, F(3, 4), _pp(10, 4, 6, 10) * _pp(20, 2, 18)),
    ]
    recs = []
    for name, d, par, s, p in rog:
        lhs = single_sum(F(1, 4), d, 0, [inv1], parity=par)
        recs.append(IdentityRecord(name, name, "known-classical", 200, lhs, prod(QPow(s), p) / _p(1, 1, 1), family="rank3"))
    for a, c in CHI3_CASES:
        recs.append(IdentityRecord(f"eq-rank3-mid{_fmt_vec((a, c))}", "eq-rank3-mid", "theorem", 60,
                                   ChiE(TadpoleSpec(3, (a, -a, c))), Chi3ThetaE(a, c), family="rank3"))
    return recs


def _reduction() -> list[IdentityRecord]:
    recs = []
    h = HALF
    chi4 = [("chi4-1", (0, 0, 0, 0)), ("chi4-2", (0, -1, 1, 0)), ("chi4-3", (0, 0, 0, h)),
            ("chi4-5", (1, -1, 1, 0)), ("chi4-4", (1, -1, 1, -h))]
    for label, e in chi4:
        inst = RankReductionInstance("even", 2, e)
        recs.append(IdentityRecord(f"reduce-even{_fmt_vec(e)}", label, "theorem", 25,
                                   ChiE(inst.tadpole()), ReduceEvenE(inst), family="reduction"))
    inst = RankReductionInstance("even", 3)
    recs.append(IdentityRecord(f"reduce-even{_fmt_vec(inst.exponents)}", "eq-reduce-even", "theorem", 25,
                               ChiE(inst.tadpole()), ReduceEvenE(inst), family="reduction"))
    for a, c in CHI3_CASES:
        inst = RankReductionInstance("odd", 1, (a, -a, c))
        recs.append(IdentityRecord(f"reduce-odd{_fmt_vec(inst.exponents)}", "eq-rank3-start", "theorem", 25,
                                   ChiE(inst.tadpole()), ReduceOddE(inst), family="reduction"))
    for e, label in (((0,) * 5, "eq-rank5-start"), ((1, -1, 0, 0, h), "eq-reduce-odd")):
        inst = RankReductionInstance("odd", 2, e)
        recs.append(IdentityRecord(f"reduce-odd{_fmt_vec(inst.exponents)}", label, "theorem", 25,
                                   ChiE(inst.tadpole()), ReduceOddE(inst), family="reduction"))
    for r in range(2, 6):
        recs.append(IdentityRecord(f"new-repn({r})", "eq-thm-new-repn", "theorem", 30,
                                   ChiE(TadpoleSpec(r)), NewRepnE(r), family="new-repn"))
    return recs


TABLE_1 = [((0, 0, 0), F(-1, 4)), ((0, -2, 0), F(5, 12)), ((0, 0, 1), F(0)), ((2, -2, 0), F(3, 4)), ((2, -2, -1), F(2, 3))]
TABLE_2 = [
    ((0, 0, 0), F(-55, 84)), ((1, 1, HALF), F(67, 42)), ((-1, -1, 0), F(137, 84)), ((0, 0, HALF), F(-5, 42)),
    ((0, -1, 0), F(65, 84)), ((1, 0, HALF), F(43, 42)), ((-1, -1, -2), F(67, 42)), ((-2, -2, -HALF), F(331, 42)),
    ((-1, -2, -HALF), F(211, 42)),
]


def _tables() -> list[IdentityRecord]:
    recs = []
    for abc, C in TABLE_1:
        recs.append(IdentityRecord(
            f"table-1{_fmt_vec(abc)}", "tab-rank4", "theorem", 0, family="table-1",
            metadata=(("abc", _fmt_vec(abc)), ("C", format_rational(C)),
                      ("series", "q^C chi_4(q^a, q^b, q^-b, q^c; q^2)")),
        ))
    for abc, C in TABLE_2:
        flagged = abc == (-1, -1, -2)
        recs.append(IdentityRecord(
            f"table-2{_fmt_vec(abc)}", "tab-rank5", "conjecture" if flagged else "theorem", 0, family="table-2",
            metadata=(("abc", _fmt_vec(abc)), ("C", format_rational(C)), ("series", "q^C S(a,b,c)")),
            note=("row as printed; the proved scaling case is S(-1,-1,-1/2), so this row is unresolved"
                  if flagged else ""),
        ))
    return recs


# ----------------------------------------------------------------------
# generators


def _ag(k: int, s: int) -> IdentityRecord:
    A = tuple(tuple(2 * min(i, j) for j in range(1, k)) for i in range(1, k))
    B = tuple(max(0, i - s + 1) for i in range(1, k))
    m = 2 * k + 1
    rhs = _pp(m, s, m - s, m) / _p(1, 1, 1)
    return IdentityRecord(f"AG({k},{s})", "AG", "known-classical", 120, NahmE(NahmSpec(A, B)), rhs,
                          family="AG", params=(k, s))


def _finite_sum(label: str) -> Callable[[int], IdentityRecord]:
    def build(i: int) -> IdentityRecord:
        return IdentityRecord(f"finite-sum-{label}({i})", f"finite-sum-{label}", "theorem", EXACT_ORDER,
                              FiniteSumE(label, i, "lhs"), FiniteSumE(label, i, "rhs"),
                              family="finite-sum", params=(i,))
    return build


def _shift(label: str) -> Callable[[int], IdentityRecord]:
    def build(i: int) -> IdentityRecord:
        return IdentityRecord(f"{label}({i})", label, "known-classical", EXACT_ORDER,
                              ShiftIdE(label, i, "lhs-poly"), ShiftIdE(label, i, "rhs-poly"),
                              family="shift", params=(i,))
    return build


def _generators() -> list[Generator]:
    gens = [
        Generator("AG", "AG", 2, _ag,
                  lambda k, s: 2 <= k <= 8 and 1 <= s <= k,
                  lambda: [(k, s) for k in range(2, 6) for s in range(1, k + 1)]),
    ]
    for label in FINITE_SUM_IDS:
        gens.append(Generator(f"finite-sum-{label}", "finite-sum", 1, _finite_sum(label),
                              lambda i: 0 <= i <= 200, lambda: [(i,) for i in range(16)]))
    for label in SHIFT_IDENTITIES:
        gens.append(Generator(label, "shift", 1, _shift(label),
                              lambda i: 0 <= i <= 200, lambda: [(i,) for i in range(16)]))
    return gens


# ----------------------------------------------------------------------
# the catalog


def _builtin_records() -> list[IdentityRecord]:
    recs = (_classical() + _slater() + _heine() + _lemma_g() + _z() + _rank4() + _rank5()
            + _rank3() + _reduction() + _tables())
    # the principal rank five character, stated directly as a tadpole sum
    s000 = next(r for r in recs if r.paper_label == "eq-rank5-1")
    recs.append(replace(s000, id="chi5-principal", paper_label="intro-5-1",
                        lhs=ChiE(TadpoleSpec(5, (0,) * 5, 4))))
    return recs


_ID_RE = re.compile(r"^(?P<name>.+)\((?P<args>-?\d+(?:\s*,\s*-?\d+)*)\)$")


class Catalog:
    """Built-in records and generators plus an optional overlay."""

    def __init__(self, overlay: Optional[str] = None):
        self._records: dict[str, IdentityRecord] = {}
        for rec in _builtin_records():
            if rec.id in self._records:
                raise CatalogError(f"duplicate built-in id {rec.id}")
            self._records[rec.id] = rec
        self._generators = {g.name: g for g in _generators()}
        self.overlay_ids: list[str] = []
        if overlay:
            self.load_overlay(overlay)

    # -- lookup -------------------------------------------------------
    def _generated(self, ident: str) -> Optional[IdentityRecord]:
        m = _ID_RE.match(ident)
        if not m or m.group("name") not in self._generators:
            return None
        gen = self._generators[m.group("name")]
        params = tuple(int(x) for x in m.group("args").split(","))
        if len(params) != gen.arity or not gen.valid(*params):
            raise CatalogError(f"parameters {params} out of range for {gen.name}")
        return gen.build(*params)

    def get(self, ident: str) -> IdentityRecord:
        if ident in self._records:
            return self._records[ident]
        rec = self._generated(ident)
        if rec is None:
            raise CatalogError(f"unknown identity id {ident!r}")
        return rec

    def __contains__(self, ident: str) -> bool:
        try:
            self.get(ident)
        except CatalogError:
            return False
        return True

    def records(self) -> list[IdentityRecord]:
        """All records, generators expanded over their default ranges, sorted by id."""
        out = list(self._records.values())
        for gen in self._generators.values():
            out.extend(gen.build(*p) for p in gen.listing())
        return sorted(out, key=lambda r: r.id)

    def generator_names(self) -> list[str]:
        return sorted(self._generators)

    def list(self, filters: Optional[dict] = None) -> list[IdentityRecord]:
        """Records matching every ``key=value`` filter (status, family, label, id)."""
        filters = dict(filters or {})
        for k in filters:
            if k not in ("status", "family", "paper_label", "id"):
                raise CatalogError(f"unknown filter key {k!r}")
        out = []
        for rec in self.records():
            if "status" in filters and rec.status != filters["status"]:
                continue
            if "family" in filters and rec.family != filters["family"]:
                continue
            if "paper_label" in filters and rec.paper_label != filters["paper_label"]:
                continue
            if "id" in filters and not rec.id.startswith(filters["id"]):
                continue
            out.append(rec)
        return out

    def paper_labels(self) -> set[str]:
        return {r.paper_label for r in self.records()}

    # -- overlay ------------------------------------------------------
    def load_overlay(self, path: str) -> None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"cannot read overlay {path}: {exc}") from exc
        entries = doc.get("identities") if isinstance(doc, dict) else None
        if not isinstance(entries, list):
            raise CatalogError("overlay must be an object with an 'identities' list")
        for ent in entries:
            try:
                rec = IdentityRecord(
                    id=str(ent["id"]),
                    paper_label=str(ent.get("paper_label", ent["id"])),
                    status=ent.get("status", "theorem"),
                    default_order=as_rational(ent.get("default_order", 50)),
                    lhs=from_json(ent["lhs"]),
                    rhs=from_json(ent["rhs"]),
                    family=str(ent.get("family", "overlay")),
                )
            except (KeyError, TypeError, ValueError, ExprError) as exc:
                raise CatalogError(f"malformed overlay entry {ent!r}: {exc}") from exc
            if rec.id in self or rec.id in self.overlay_ids:
                raise CatalogError(f"overlay entry {rec.id!r} would shadow an existing identity")
            self._records[rec.id] = rec
            self.overlay_ids.append(rec.id)


def overlay_entry(rec: IdentityRecord) -> dict:
    """The overlay-file form of a record (used to export or inject entries)."""
    return {
        "id": rec.id,
        "paper_label": rec.paper_label,
        "status": rec.status,
        "default_order": format_rational(rec.default_order),
        "lhs": to_json(rec.lhs),
        "rhs": to_json(rec.rhs),
    }


_DEFAULT: dict[Optional[str], Catalog] = {}


def default_catalog(overlay: Optional[str] = None) -> Catalog:
    """The shared catalog, with ``overlay`` or ``$NAHMFORGE_CATALOG`` loaded."""
    if overlay is None:
        overlay = os.environ.get("NAHMFORGE_CATALOG") or None
    if overlay not in _DEFAULT:
        _DEFAULT[overlay] = Catalog(overlay)
    return _DEFAULT[overlay]


def verify_record(rec: IdentityRecord, order=None) -> VerificationReport:
    """Evaluate both sides of ``rec`` and compare them below ``order``."""
    if rec.metadata_only:
        raise CatalogError(f"{rec.id} is a metadata row and has nothing to verify")
    N = rec.default_order if order is None else as_accuracy(order)
    if N == INF or N <= 0:
        raise CatalogError("order must be a positive rational")
    t0 = time.perf_counter()
    lhs = evaluate(rec.lhs, N)
    rhs = evaluate(rec.rhs, N)
    if min(lhs.accuracy, rhs.accuracy) < N:
        outcome, detail = "accuracy-insufficient", None
    else:
        detail = first_mismatch(lhs, rhs, N)
        outcome = "match" if detail is None else "mismatch"
    return VerificationReport(rec.id, rec.paper_label, rec.status, N, outcome, detail, time.perf_counter() - t0)


def verify(ident: str, order=None, catalog: Optional[Catalog] = None) -> VerificationReport:
    cat = catalog or default_catalog()
    return verify_record(cat.get(ident), order)


def catalog_list(filters: Optional[dict] = None, catalog: Optional[Catalog] = None) -> list[dict]:
    cat = catalog or default_catalog()
    return [r.summary() for r in cat.list(filters)]


__all__ = [
    "Catalog",
    "CatalogError",
    "IdentityRecord",
    "VerificationReport",
    "Generator",
    "default_catalog",
    "verify",
    "verify_record",
    "catalog_list",
    "overlay_entry",
    "single_sum",
    "TABLE_1",
    "TABLE_2",
]
