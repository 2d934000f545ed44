"""Expression trees over the series constructors.

Both sides of every catalog identity are :class:`Expr` trees.  Evaluation is a
two-pass scheme: :meth:`Expr.valuation_bound` gives a lower bound for the
valuation of every node (leaves are probed at a small accuracy), and
:func:`evaluate` then asks each child for exactly the accuracy that makes its
parent accurate below the requested order.

Trees serialise to nested ``{"op": name, "args": [...]}`` objects with exact
rationals written as ``"p/q"`` strings; parameter records (product specs,
lattice data and so on) become ``{"type": name, ...fields}`` objects.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, ClassVar, Optional

from . import products as P
from ._plan import probe_valuation
from .lattice import Factor, LatticeSum, evaluate as lattice_evaluate
from .nahm import NahmSpec, TadpoleSpec, chi, nahm_sum, new_repn_rhs
from .products import ProductSpec, ThetaSpec
from .reduction import (
    FamilyIndex,
    RankReductionInstance,
    chi3_theta_rhs,
    chi4_theta_rhs,
    chi5_theta_rhs,
    family_sum,
    finite_sum_lhs,
    finite_sum_rhs,
    reduce_even_rhs,
    reduce_odd_rhs,
    s_scaling,
    shift_identity_lhs,
    shift_identity_rhs,
    shift_identity_poly,
)
from .series import INF, QSeries, SeriesError, as_accuracy, as_rational, format_rational, invert, make_monomial

_OPS: dict[str, type] = {}


class ExprError(ValueError):
    """Malformed expression or expression document."""


def _register(cls):
    _OPS[cls.op] = cls
    return cls


class Expr:
    """Base class; subclasses are frozen dataclasses."""

    op: ClassVar[str] = ""

    # -- algebra sugar ------------------------------------------------
    def __add__(self, other):
        return Add((self, lift(other)))

    def __radd__(self, other):
        return Add((lift(other), self))

    def __sub__(self, other):
        return Add((self, Neg(lift(other))))

    def __rsub__(self, other):
        return Add((lift(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, lift(other)))

    def __rmul__(self, other):
        return Mul((lift(other), self))

    def __truediv__(self, other):
        return Div(self, lift(other))

    def __rtruediv__(self, other):
        return Div(lift(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n: int):
        return IntPow(self, n)

    # -- evaluation ---------------------------------------------------
    def children(self) -> tuple["Expr", ...]:
        return ()

    def valuation_bound(self):
        """Lower bound for the valuation (``INF`` for an exact zero)."""
        return _valuation(self)

    def _bound(self):
        return probe_valuation(lambda a: _leaf(self, a))

    def _eval(self, N) -> QSeries:  # pragma: no cover - overridden
        raise NotImplementedError


@lru_cache(maxsize=None)
def _valuation(e: Expr):
    return e._bound()


@lru_cache(maxsize=512)
def _leaf(e: Expr, N) -> QSeries:
    return e._eval(N)


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(as_rational(x))


def evaluate(e: Expr, accuracy) -> QSeries:
    """Evaluate ``e`` so that the result is accurate below ``accuracy``.

    If the accuracy cannot be reached (for instance because a denominator has
    no known terms) the result carries its true, smaller accuracy.
    """
    N = as_accuracy(accuracy)
    if N == INF:
        raise ExprError("evaluation needs a finite accuracy")
    return _eval_node(e, N)


def _eval_node(e: Expr, N) -> QSeries:
    if isinstance(e, _Composite):
        out = e._eval(N)
    else:
        out = _leaf(e, N)
    return out.truncate(N) if out.accuracy > N else out


# ----------------------------------------------------------------------
# leaves


def _frac(x):
    return as_rational(x)


@_register
@dataclass(frozen=True)
class Const(Expr):
    op: ClassVar[str] = "Const"
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _frac(self.c))

    def _bound(self):
        return INF if self.c == 0 else Fraction(0)

    def _eval(self, N):
        return QSeries.constant(self.c)


@_register
@dataclass(frozen=True)
class QPow(Expr):
    op: ClassVar[str] = "QPow"
    e: Fraction

    def __post_init__(self):
        object.__setattr__(self, "e", _frac(self.e))

    def _bound(self):
        return self.e

    def _eval(self, N):
        return make_monomial(1, self.e)


@_register
@dataclass(frozen=True)
class Poch(Expr):
    """``(sign q^offset; q^step)_length``; infinite symbols with offset <= 0 use the shift rule."""

    op: ClassVar[str] = "Poch"
    spec: ProductSpec

    def _eval(self, N):
        s = self.spec
        if s.length is None:
            return P.infinite_pochhammer(s.sign, s.offset, s.step, N)
        return P.pochhammer(s, N)


@_register
@dataclass(frozen=True)
class JE(Expr):
    op: ClassVar[str] = "J"
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", _frac(self.m))

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return P.J(self.m, N)


@_register
@dataclass(frozen=True)
class J2E(Expr):
    op: ClassVar[str] = "J2"
    a: Fraction
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "m", _frac(self.m))

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return P.J2(self.a, self.m, N)


@_register
@dataclass(frozen=True)
class ThetaE(Expr):
    op: ClassVar[str] = "Theta"
    spec: ThetaSpec

    def _eval(self, N):
        return P.theta(self.spec, N)


@_register
@dataclass(frozen=True)
class PhiE(Expr):
    op: ClassVar[str] = "Phi"

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return P.phi(N)


@_register
@dataclass(frozen=True)
class PsiE(Expr):
    op: ClassVar[str] = "Psi"

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return P.psi(N)


@_register
@dataclass(frozen=True)
class Theta0E(Expr):
    op: ClassVar[str] = "Theta0"

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return P.theta0(N)


@_register
@dataclass(frozen=True)
class Theta1E(Expr):
    op: ClassVar[str] = "Theta1"

    def _bound(self):
        return Fraction(1)

    def _eval(self, N):
        return P.theta1(N)


@_register
@dataclass(frozen=True)
class QBinomE(Expr):
    op: ClassVar[str] = "QBinom"
    n: int
    m: int

    def _eval(self, N):
        return P.qbinom(self.n, self.m)


@_register
@dataclass(frozen=True)
class NahmE(Expr):
    op: ClassVar[str] = "Nahm"
    spec: NahmSpec

    def _eval(self, N):
        return nahm_sum(self.spec, N)


@_register
@dataclass(frozen=True)
class ChiE(Expr):
    op: ClassVar[str] = "Chi"
    spec: TadpoleSpec

    def _eval(self, N):
        return chi(self.spec, N)


@_register
@dataclass(frozen=True)
class LatticeE(Expr):
    """A general weighted lattice sum (used for the single-sum identities)."""

    op: ClassVar[str] = "Lattice"
    data: LatticeSum

    def _eval(self, N):
        return lattice_evaluate(self.data, N)


@_register
@dataclass(frozen=True)
class FamilyE(Expr):
    op: ClassVar[str] = "Family"
    idx: FamilyIndex

    def _eval(self, N):
        return family_sum(self.idx, N)


@_register
@dataclass(frozen=True)
class ReduceEvenE(Expr):
    op: ClassVar[str] = "ReduceEven"
    inst: RankReductionInstance

    def _eval(self, N):
        return reduce_even_rhs(self.inst, N)


@_register
@dataclass(frozen=True)
class ReduceOddE(Expr):
    op: ClassVar[str] = "ReduceOdd"
    inst: RankReductionInstance

    def _eval(self, N):
        return reduce_odd_rhs(self.inst, N)


@_register
@dataclass(frozen=True)
class NewRepnE(Expr):
    op: ClassVar[str] = "NewRepn"
    r: int

    def _bound(self):
        return Fraction(0)

    def _eval(self, N):
        return new_repn_rhs(self.r, N)


@_register
@dataclass(frozen=True)
class FiniteSumE(Expr):
    """``(q;q)_N`` times one side of a finite double-sum identity (exact)."""

    op: ClassVar[str] = "FiniteSum"
    id: str
    i: int
    side: str

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        if self.side not in ("lhs", "rhs"):
            raise ExprError("side must be 'lhs' or 'rhs'")

    def _eval(self, N):
        f = finite_sum_lhs if self.side == "lhs" else finite_sum_rhs
        return f(self.id, self.i)


@_register
@dataclass(frozen=True)
class ShiftIdE(Expr):
    """One side of a ``(a q^{-i}; q)_inf`` shift identity.

    The ``-poly`` sides divide out the common infinite tail and are exact.
    """

    op: ClassVar[str] = "ShiftId"
    label: str
    i: int
    side: str

    def __post_init__(self):
        if self.side not in ("lhs", "rhs", "lhs-poly", "rhs-poly"):
            raise ExprError("side must be 'lhs', 'rhs', 'lhs-poly' or 'rhs-poly'")

    def _eval(self, N):
        if self.side.endswith("-poly"):
            return shift_identity_poly(self.label, self.i, self.side[:3])
        f = shift_identity_lhs if self.side == "lhs" else shift_identity_rhs
        return f(self.label, self.i, N)


@_register
@dataclass(frozen=True)
class Chi4ThetaE(Expr):
    op: ClassVar[str] = "Chi4Theta"
    case: int

    def _eval(self, N):
        return chi4_theta_rhs(self.case, N)


@_register
@dataclass(frozen=True)
class Chi5ThetaE(Expr):
    op: ClassVar[str] = "Chi5Theta"
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for f in ("a", "b", "c"):
            object.__setattr__(self, f, _frac(getattr(self, f)))

    def _eval(self, N):
        return chi5_theta_rhs(self.a, self.b, self.c, N)


@_register
@dataclass(frozen=True)
class SScalingE(Expr):
    op: ClassVar[str] = "SScaling"
    source: tuple
    target: tuple

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(_frac(x) for x in self.source))
        object.__setattr__(self, "target", tuple(_frac(x) for x in self.target))

    def _eval(self, N):
        return s_scaling(*self.source, *self.target, N)


@_register
@dataclass(frozen=True)
class Chi3ThetaE(Expr):
    op: ClassVar[str] = "Chi3Theta"
    a: int
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _frac(self.c))

    def _eval(self, N):
        return chi3_theta_rhs(self.a, self.c, N)


# ----------------------------------------------------------------------
# composites


class _Composite(Expr):
    pass


@_register
@dataclass(frozen=True)
class Neg(_Composite):
    op: ClassVar[str] = "Neg"
    x: Expr

    def children(self):
        return (self.x,)

    def _bound(self):
        return self.x.valuation_bound()

    def _eval(self, N):
        return -_eval_node(self.x, N)


@_register
@dataclass(frozen=True)
class Add(_Composite):
    op: ClassVar[str] = "Add"
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ExprError("Add needs at least one term")

    def children(self):
        return self.terms

    def _bound(self):
        return min(t.valuation_bound() for t in self.terms)

    def _eval(self, N):
        out = QSeries.zero()
        for t in self.terms:
            out = out + _eval_node(t, N)
        return out


@_register
@dataclass(frozen=True)
class Mul(_Composite):
    op: ClassVar[str] = "Mul"
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ExprError("Mul needs at least one factor")

    def children(self):
        return self.factors

    def _bound(self):
        vals = [f.valuation_bound() for f in self.factors]
        return INF if INF in vals else sum(vals)

    def _eval(self, N):
        vals = [f.valuation_bound() for f in self.factors]
        if INF in vals:
            return QSeries.zero()
        total = sum(vals)
        if N <= total:
            return QSeries.zero(N)
        out = QSeries.constant(1)
        for f, v in zip(self.factors, vals):
            out = out * _eval_node(f, N - (total - v))
        return out


def _exact_valuation(e: Expr):
    v = probe_valuation(lambda a: evaluate(e, a), start=max(Fraction(1), _finite(e.valuation_bound()) + 1))
    return v


def _finite(v):
    return Fraction(0) if v == INF else v


@_register
@dataclass(frozen=True)
class Div(_Composite):
    op: ClassVar[str] = "Div"
    num: Expr
    den: Expr

    def children(self):
        return (self.num, self.den)

    def _bound(self):
        vn = self.num.valuation_bound()
        if vn == INF:
            return INF
        return vn - _exact_valuation(self.den)

    def _eval(self, N):
        vn = self.num.valuation_bound()
        if vn == INF:
            return QSeries.zero()
        v = _exact_valuation(self.den)
        if v == INF:
            raise ZeroDivisionError("division by the zero series")
        g = _eval_node(self.den, N - vn + 2 * v)
        if g.is_zero():
            raise ZeroDivisionError("denominator has no known terms")
        f = _eval_node(self.num, N + v)
        return f * invert(g)


@_register
@dataclass(frozen=True)
class IntPow(_Composite):
    op: ClassVar[str] = "IntPow"
    base: Expr
    n: int

    def children(self):
        return (self.base,)

    def _bound(self):
        v = self.base.valuation_bound()
        if self.n >= 0:
            return Fraction(0) if self.n == 0 else (INF if v == INF else self.n * v)
        return self.n * _exact_valuation(self.base)

    def _eval(self, N):
        n = self.n
        if n == 0:
            return QSeries.constant(1)
        if n < 0:
            return _eval_node(Div(Const(1), IntPow(self.base, -n)), N)
        v = self.base.valuation_bound()
        if v == INF:
            return QSeries.zero()
        if N <= n * v:
            return QSeries.zero(N)
        return _eval_node(self.base, N - (n - 1) * v) ** n


@_register
@dataclass(frozen=True)
class SubstQk(_Composite):
    op: ClassVar[str] = "SubstQk"
    x: Expr
    k: Fraction

    def __post_init__(self):
        object.__setattr__(self, "k", _frac(self.k))
        if self.k <= 0:
            raise ExprError("substitution q -> q^k needs k > 0")

    def children(self):
        return (self.x,)

    def _bound(self):
        v = self.x.valuation_bound()
        return INF if v == INF else self.k * v

    def _eval(self, N):
        return _eval_node(self.x, N / self.k).substitute(self.k)


@_register
@dataclass(frozen=True)
class NegateQ(_Composite):
    """``f(-q)`` for a series with integer exponents."""

    op: ClassVar[str] = "NegateQ"
    x: Expr

    def children(self):
        return (self.x,)

    def _bound(self):
        return self.x.valuation_bound()

    def _eval(self, N):
        return _eval_node(self.x, as_accuracy(-(-N // 1))).negate_q()


@_register
@dataclass(frozen=True)
class TwistI(_Composite):
    """``i^extra f(i q)`` for a series on which the result stays real."""

    op: ClassVar[str] = "TwistI"
    x: Expr
    extra: int = 0

    def children(self):
        return (self.x,)

    def _bound(self):
        return self.x.valuation_bound()

    def _eval(self, N):
        return _eval_node(self.x, as_accuracy(-(-N // 1))).twist_i(self.extra)


# ----------------------------------------------------------------------
# helpers for building trees


def poch(sign: int, offset, step=1, length: Optional[int] = None) -> Poch:
    return Poch(ProductSpec(sign, offset, step, length))


def prod(*factors) -> Expr:
    fs = tuple(lift(f) for f in factors)
    return fs[0] if len(fs) == 1 else Mul(fs)


def jquot(num: dict, den: dict = None, coeff=1, qpow=0) -> Expr:
    """``coeff q^qpow prod J_m^e / prod J_m^e``; keys ``m`` or ``(a, m)``."""
    parts: list[Expr] = []
    if coeff != 1:
        parts.append(Const(coeff))
    if qpow:
        parts.append(QPow(qpow))
    for table, sgn in ((num or {}, 1), (den or {}, -1)):
        for key, e in table.items():
            base = J2E(*key) if isinstance(key, tuple) else JE(key)
            parts.append(base if sgn * e == 1 else IntPow(base, sgn * e))
    if not parts:
        return Const(1)
    return prod(*parts)


# ----------------------------------------------------------------------
# JSON


_STRUCTS = {
    "ProductSpec": ProductSpec,
    "ThetaSpec": ThetaSpec,
    "NahmSpec": NahmSpec,
    "TadpoleSpec": TadpoleSpec,
    "LatticeSum": LatticeSum,
    "Factor": Factor,
    "FamilyIndex": FamilyIndex,
    "RankReductionInstance": RankReductionInstance,
}


def _encode(v) -> Any:
    if isinstance(v, Expr):
        return to_json(v)
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return v
    if isinstance(v, (tuple, list)):
        return [_encode(x) for x in v]
    if dataclasses.is_dataclass(v) and type(v).__name__ in _STRUCTS:
        out = {"type": type(v).__name__}
        for f in dataclasses.fields(v):
            out[f.name] = _encode(getattr(v, f.name))
        return out
    raise ExprError(f"cannot serialise {v!r}")


def to_json(e: Expr) -> dict:
    """Nested ``{"op", "args"}`` form of ``e``."""
    return {"op": e.op, "args": [_encode(getattr(e, f.name)) for f in dataclasses.fields(e)]}


def _decode(v) -> Any:
    if isinstance(v, dict):
        if "op" in v:
            return from_json(v)
        if "type" in v:
            cls = _STRUCTS.get(v["type"])
            if cls is None:
                raise ExprError(f"unknown record type {v['type']!r}")
            kwargs = {k: _decode(x) for k, x in v.items() if k != "type"}
            try:
                return cls(**kwargs)
            except TypeError as exc:
                raise ExprError(f"bad fields for {v['type']}: {exc}") from exc
        raise ExprError(f"object without 'op' or 'type': {v!r}")
    if isinstance(v, list):
        return tuple(_decode(x) for x in v)
    return v


def from_json(doc) -> Expr:
    """Inverse of :func:`to_json`; also accepts a JSON string."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "op" not in doc:
        raise ExprError("an expression must be an object with an 'op' field")
    cls = _OPS.get(doc["op"])
    if cls is None:
        raise ExprError(f"unknown expression op {doc['op']!r}")
    args = [_decode(a) for a in doc.get("args", [])]
    try:
        return cls(*args)
    except (TypeError, ValueError, SeriesError) as exc:
        raise ExprError(f"bad arguments for {doc['op']}: {exc}") from exc


OPS = tuple(sorted(_OPS))

__all__ = [
    "Expr",
    "ExprError",
    "evaluate",
    "to_json",
    "from_json",
    "lift",
    "poch",
    "prod",
    "jquot",
    "OPS",
] + [cls.__name__ for cls in _OPS.values()]
