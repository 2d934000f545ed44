"""Rank reduction, the auxiliary multi-sum families and their theta recombinations.

Conventions
-----------
* ``G_k, Gt_k`` are the triple sums over ``m, n, r >= 0`` of
  ``(-1)^m q^{(n-m)^2 + (n-r)^2 + (m,n,r).beta_k} / ((q^4;q^4)_m (q^4;q^4)_n (q^4;q^4)_r)``
  (``Gt`` carries ``(-1)^n`` instead of ``(-1)^m``).  With ``parity = i`` only
  the terms with ``m + r = i (mod 2)`` are kept.  ``L_k^{(i)}`` keeps the
  terms of ``G_k`` with ``n - m = i (mod 2)``.
* ``Z(alpha)`` is the Nahm sum with exponent
  ``2 n_1^2 + 2 (n_1 + n_2)^2 + (n_2 - n_3)^2 + 4 n.alpha`` over
  ``(q^4;q^4)`` denominators; ``Zsplit`` keeps ``n_2 - n_3 = i (mod 2)``.
* ``H_k, Ht_k`` are the double sums
  ``q^{m^2 + (m-n)^2 + (m,n).gamma_k} / ((q^4;q^4)_m (q^4;q^4)_n)``
  (``Ht`` with ``(-1)^m``); ``parity = i`` keeps ``n = i (mod 2)``.

The index data ``beta_k``, ``alpha_k`` and ``gamma_k`` live in :data:`BETA`,
:data:`ALPHA` and :data:`GAMMA` and are shared with the catalog.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._plan import product_to
from .lattice import LatticeSum, evaluate, qpoch_inverse
from .nahm import TadpoleSpec, chi, _unit
from .products import (
    J,
    finite_product,
    infinite_pochhammer,
    infinite_product,
    qbinom,
    theta0,
    theta1,
)
from .series import INF, QSeries, as_accuracy, as_rational, make_monomial

F = Fraction

BETA = {1: (2, 0, 0), 2: (2, -2, 2), 3: (2, 0, 2), 4: (0, 0, 2)}
ALPHA = {
    1: (F(0), F(0), F(0)),
    2: (F(0), F(-1, 2), F(1, 2)),
    3: (F(0), F(0), F(1, 2)),
    4: (F(1), F(1, 2), F(1, 2)),
    5: (F(1), F(1, 2), F(0)),
}
GAMMA = {1: (0, 0), 2: (0, 2), 3: (-2, 2)}

# 1/2 n^T A_Z n, scaled by 4, is 2 n_1^2 + 2 (n_1 + n_2)^2 + (n_2 - n_3)^2
A_Z = ((F(2), F(1), F(0)), (F(1), F(3, 2), F(-1, 2)), (F(0), F(-1, 2), F(1, 2)))

FAMILIES = {"G": 4, "Gt": 4, "Z": 5, "Zsplit": 5, "H": 3, "Ht": 3, "L": 4}


class ReductionError(ValueError):
    """Parameters outside the range where a reduction formula applies."""


# ----------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilyIndex:
    """One member of an auxiliary family; ``parity`` selects a residue class."""

    family: str
    k: int
    parity: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {sorted(FAMILIES)}")
        if not isinstance(self.k, int) or not 1 <= self.k <= FAMILIES[self.family]:
            raise ValueError(f"{self.family}_k needs 1 <= k <= {FAMILIES[self.family]}")
        if self.parity not in (None, 0, 1):
            raise ValueError("parity must be 0, 1 or None")
        if self.family in ("Zsplit", "L") and self.parity is None:
            raise ValueError(f"the {self.family} family needs a parity")
        if self.family == "Z" and self.parity is not None:
            raise ValueError("use the Zsplit family for parity parts of Z")

    @property
    def label(self) -> str:
        p = "" if self.parity is None else f"^({self.parity})"
        return f"{self.family}_{self.k}{p}"


def family_lattice(idx: FamilyIndex) -> LatticeSum:
    """The lattice data of a family member."""
    fam, k, p = idx.family, idx.k, idx.parity
    if fam in ("G", "Gt", "L"):
        b1, b2, b3 = BETA[k]
        # coordinates (u, w, m) with u = n - m, w = n - r
        parities = ()
        if fam == "L":
            parities = (((1, 0, 0), p),)
        elif p is not None:
            parities = (((1, 1, 0), p),)  # m + r = 2m + u - w
        return LatticeSum(
            quad=((2, 0), (0, 2)),
            linear=(b2 + b3, -b3, b1 + b2 + b3),
            lower=(None, None, 0),
            factors=(
                qpoch_inverse(4, (0, 0, 1)),
                qpoch_inverse(4, (1, 0, 1)),
                qpoch_inverse(4, (1, -1, 1)),
            ),
            parities=parities,
            signs=(1, 0, 1) if fam == "Gt" else (0, 0, 1),
        )
    if fam in ("Z", "Zsplit"):
        return LatticeSum(
            quad=tuple(tuple(4 * x for x in row) for row in A_Z),
            linear=tuple(4 * a for a in ALPHA[k]),
            lower=(0, 0, 0),
            factors=tuple(qpoch_inverse(4, _unit(i, 3)) for i in range(3)),
            parities=() if p is None else (((0, 1, -1), p),),
        )
    # H, Ht
    return LatticeSum(
        quad=((4, -2), (-2, 2)),
        linear=GAMMA[k],
        lower=(0, 0),
        factors=(qpoch_inverse(4, (1, 0)), qpoch_inverse(4, (0, 1))),
        parities=() if p is None else (((0, 1), p),),
        signs=(1, 0) if fam == "Ht" else (0, 0),
    )


def family_sum(idx: FamilyIndex, accuracy, slack: int = 0) -> QSeries:
    """The multi-sum of ``idx`` below ``accuracy``."""
    return evaluate(family_lattice(idx), as_accuracy(accuracy), slack)


# ----------------------------------------------------------------------
# rank reduction


@dataclass(frozen=True)
class RankReductionInstance:
    """``chi_rank(q^{e_1}, ..., q^{e_rank}; q^base)`` with paired inverse weights.

    ``parity = "even"`` means rank ``2r`` with ``x_{2i} x_{2i+1} = 1`` for
    ``1 <= i < r`` (and ``x_0 = 1/x_1``); ``"odd"`` means rank ``2r + 1`` with
    ``x_{2i-1} x_{2i} = 1`` for ``1 <= i <= r``.  ``exponents`` lists all of
    ``e_1, ..., e_rank`` in units of ``q``.
    """

    parity: str
    r: int
    exponents: tuple = ()
    base: Fraction = Fraction(1)

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ReductionError("parity must be 'even' or 'odd'")
        if not isinstance(self.r, int) or self.r < 1:
            raise ReductionError("r must be a positive integer")
        rank = self.rank
        e = tuple(as_rational(x) for x in self.exponents) or (F(0),) * rank
        if len(e) != rank:
            raise ReductionError(f"need {rank} exponents, got {len(e)}")
        object.__setattr__(self, "exponents", e)
        object.__setattr__(self, "base", as_rational(self.base))
        if self.base <= 0:
            raise ReductionError("base must be positive")
        if self.parity == "even":
            pairs = [(2 * i, 2 * i + 1) for i in range(1, self.r)]
        else:
            pairs = [(2 * i - 1, 2 * i) for i in range(1, self.r + 1)]
        for a, b in pairs:
            if e[a - 1] + e[b - 1] != 0:
                raise ReductionError(f"x_{a} x_{b} must be 1 (exponents {e[a - 1]} and {e[b - 1]})")

    @property
    def rank(self) -> int:
        return 2 * self.r if self.parity == "even" else 2 * self.r + 1

    def tadpole(self) -> TadpoleSpec:
        return TadpoleSpec(self.rank, self.exponents, self.base)


class _Form:
    """Accumulates ``sum c (v.y)^2 + b.y`` into lattice data."""

    def __init__(self, dim: int):
        self.dim = dim
        self.Q = [[F(0)] * dim for _ in range(dim)]
        self.b = [F(0)] * dim

    def square(self, c, v):
        for i in range(self.dim):
            for j in range(self.dim):
                self.Q[i][j] += 2 * c * v[i] * v[j]

    def linear(self, i, c):
        self.b[i] += c

    def quad(self):
        return tuple(tuple(row) for row in self.Q)


def _vec(dim, entries):
    v = [F(0)] * dim
    for i, c in entries:
        v[i] += c
    return v


def reduction_lattice(inst: RankReductionInstance) -> LatticeSum:
    """Lattice data of the reduced multi-sum in base ``q`` (exponents ``e/base``)."""
    f = [e / inst.base for e in inst.exponents]
    x = lambda i: f[i - 1]  # noqa: E731  (1-based access)
    r = inst.r
    half, quarter = F(1, 2), F(1, 4)
    if inst.parity == "even":
        nn = r + 1  # n_1 .. n_{r+1}; then l_2 .. l_r
        dim = nn + (r - 1)
        n = lambda i: i - 1  # noqa: E731
        ell = lambda k: nn + k - 2  # noqa: E731
        form = _Form(dim)
        form.square(half, _vec(dim, [(n(1), 1)]))
        form.square(half, _vec(dim, [(n(1), 1), (n(2), 1)]))
        for i in range(2, r + 1):
            form.square(quarter, _vec(dim, [(n(i), 1), (n(i + 1), -1)]))
        x0 = -x(1)
        form.linear(n(1), -x0)
        prev = x0
        for j in range(1, r + 1):
            form.linear(n(j + 1), x(2 * j) - prev)
            prev = x(2 * j)
        for k in range(2, r + 1):
            form.square(1, _vec(dim, [(ell(k), 1), (n(k), -half), (n(k + 1), half)]))
            form.linear(ell(k), -x(2 * k - 2))
    else:
        nn = r
        dim = 2 * r
        n = lambda i: i - 1  # noqa: E731
        ell = lambda k: nn + k - 1  # noqa: E731
        form = _Form(dim)
        for i in range(1, r + 1):
            entries = [(n(i), 1)] + ([(n(i - 1), -1)] if i > 1 else [])
            form.square(quarter, _vec(dim, entries))
        for j in range(1, r + 1):
            form.linear(n(j), x(2 * j + 1) - x(2 * j - 1))
        for k in range(1, r + 1):
            entries = [(ell(k), 1), (n(k), half)] + ([(n(k - 1), -half)] if k > 1 else [])
            form.square(1, _vec(dim, entries))
            form.linear(ell(k), -x(2 * k - 1))
    lower = (0,) * nn + (None,) * (dim - nn)
    factors = tuple(qpoch_inverse(1, _unit(i, dim)) for i in range(nn))
    return LatticeSum(quad=form.quad(), linear=tuple(form.b), lower=lower, factors=factors)


def _reduce(inst: RankReductionInstance, accuracy, slack: int) -> QSeries:
    N = as_accuracy(accuracy)
    k = inst.base
    M = N / k
    top = inst.exponents[-1] / k
    powers = inst.r - 1 if inst.parity == "even" else inst.r
    ls = reduction_lattice(inst)
    makers = [
        lambda a: infinite_pochhammer(-1, F(1, 2) + top, 1, a),
        lambda a: J(1, a) ** -powers if powers else QSeries.constant(1),
        lambda a: evaluate(ls, a, slack),
    ]
    return product_to(M, makers).substitute(k)


def reduce_even_rhs(inst: RankReductionInstance, accuracy, slack: int = 0) -> QSeries:
    """Right side of the even rank reduction formula for ``chi_{2r}``."""
    if inst.parity != "even":
        raise ReductionError("reduce_even_rhs needs an even instance")
    return _reduce(inst, accuracy, slack)


def reduce_odd_rhs(inst: RankReductionInstance, accuracy, slack: int = 0) -> QSeries:
    """Right side of the odd rank reduction formula for ``chi_{2r+1}``."""
    if inst.parity != "odd":
        raise ReductionError("reduce_odd_rhs needs an odd instance")
    return _reduce(inst, accuracy, slack)


# ----------------------------------------------------------------------
# finite sums and shift identities

# label -> (N = 2i + offset, coefficient of n, coefficient of r, alternating sign)
_FINITE_SUMS = {
    "1": (0, F(1, 2), F(0), True),
    "2": (1, F(1, 2), F(0), True),
    "3": (0, F(1, 2), F(0), False),
    "4": (1, F(1, 2), F(0), False),
    "5": (0, F(0), F(0), True),
    "6": (1, F(0), F(0), True),
    "6-add": (0, F(0), F(0), False),
    "7": (1, F(0), F(0), False),
    "8": (0, F(-1, 2), F(1, 2), True),
    "9": (0, F(-1, 2), F(0), True),
    "10": (1, F(-1, 2), F(0), True),
    "11": (1, F(-1, 2), F(0), False),
}
FINITE_SUM_IDS = tuple(_FINITE_SUMS)


def _finite_id(id) -> str:
    key = str(id)
    if key not in _FINITE_SUMS:
        raise ValueError(f"unknown finite sum {id!r}; expected one of {FINITE_SUM_IDS}")
    return key


def finite_sum_length(id, i: int) -> int:
    """``n + r`` for the finite sum ``id`` at index ``i``."""
    if not isinstance(i, int) or i < 0:
        raise ValueError("i must be a natural number")
    return 2 * i + _FINITE_SUMS[_finite_id(id)][0]


def finite_sum_lhs(id, i: int) -> QSeries:
    """``(q;q)_N`` times the double sum over ``n + r = N``.

    Clearing the common denominator ``(q;q)_N`` turns each term into a
    Gaussian coefficient, so both sides are exact Laurent polynomials.
    """
    off, a, b, alt = _FINITE_SUMS[_finite_id(id)]
    N = finite_sum_length(id, i)
    out = QSeries.zero()
    for n in range(N + 1):
        r = N - n
        e = F(-n * r, 2) + a * n + b * r
        term = qbinom(N, n).shift(e)
        out = out + (term.scale(-1) if alt and n % 2 else term)
    return out


def _p(sign, offset, n):
    return finite_product(sign, offset, 1, n)


def finite_sum_rhs(id, i: int) -> QSeries:
    """``(q;q)_N`` times the closed form of the finite sum ``id``."""
    key = _finite_id(id)
    finite_sum_length(key, i)
    h = F(1, 2)
    one = QSeries.constant(1)
    sgn = lambda s: one if s % 2 == 0 else one.scale(-1)  # noqa: E731
    if key in ("1", "9"):
        return one if i == 0 else QSeries.zero()
    if key == "2":
        return (sgn(i) * _p(1, h, i) * _p(1, h, i + 1)).shift(F(-i * i, 2))
    if key == "3":
        return (_p(-1, 0, i) * _p(-1, 1, i)).shift(F(-(i * i - i), 2))
    if key == "4":
        return (_p(-1, h, i) * _p(-1, h, i + 1)).shift(F(-i * i, 2))
    if key == "5":
        return (sgn(i) * _p(1, h, i) ** 2).shift(F(-i * i, 2))
    if key == "6":
        return QSeries.zero()
    if key == "6-add":
        return (_p(-1, h, i) ** 2).shift(F(-i * i, 2))
    if key == "7":
        return (_p(-1, 1, i) ** 2).scale(2).shift(F(-i * (i + 1), 2))
    if key == "8":
        if i == 0:
            return one
        return (sgn(i + 1) * _p(1, h, i - 1) * _p(1, h, i + 1)).shift(F(-(i * i + 1), 2))
    if key == "10":
        return (sgn(i + 1) * _p(1, h, i) * _p(1, h, i + 1)).shift(F(-(i + 1) ** 2, 2))
    # "11"
    return (_p(-1, h, i) * _p(-1, h, i + 1)).shift(F(-(i + 1) ** 2, 2))


# (a q^{-shift}; q)_inf identities: label -> (sign, offset as a function of i)
SHIFT_IDENTITIES = {
    "finite-1": (1, lambda i: F(-i)),
    "finite-2": (1, lambda i: F(-i) - F(1, 2)),
    "finite-add": (1, lambda i: F(1, 2) - i),
    "finite-3": (-1, lambda i: F(-i)),
    "finite-4": (-1, lambda i: F(-i) - F(1, 2)),
    "finite-5": (-1, lambda i: F(1 - i)),
    "finite-6": (-1, lambda i: F(1, 2) - i),
}


def shift_identity_lhs(label: str, i: int, accuracy) -> QSeries:
    """``(sign q^{offset}; q)_inf`` by splitting off the factors with offset <= 0."""
    sign, off = _shift_data(label, i)
    N = as_accuracy(accuracy)
    head = 0
    while off + head <= 0:
        head += 1
    fin = finite_product(sign, off, 1, head)
    if fin.is_zero():
        return QSeries.zero()
    return product_to(
        N, [lambda a: fin, lambda a: infinite_product([(sign, off + head, 1, 1)], a)]
    )


def _shift_rhs_data(label: str, i: int):
    """``(c, e, sign, offset, n)`` with closed form ``c q^e (sign q^offset; q)_n (sign q^offset; q)_inf``.

    ``None`` stands for the zero closed form.
    """
    h = F(1, 2)
    if label == "finite-1":
        return None
    if label == "finite-2":
        return ((-1) ** (i + 1), -F((i + 1) ** 2, 2), 1, h, i + 1)
    if label == "finite-add":
        return ((-1) ** i, -F(i * i, 2), 1, h, i)
    if label == "finite-3":
        return (2, -F(i * i + i, 2), -1, F(1), i)
    if label == "finite-4":
        return (1, -F((i + 1) ** 2, 2), -1, h, i + 1)
    if label == "finite-5":
        if i == 0:
            return (1, F(0), -1, F(1), 0)
        return (2, -F(i * i - i, 2), -1, F(1), i - 1)
    return (1, -F(i * i, 2), -1, h, i)  # finite-6


def shift_identity_rhs(label: str, i: int, accuracy) -> QSeries:
    """Closed form of the shift identity ``label`` at index ``i``."""
    _shift_data(label, i)
    N = as_accuracy(accuracy)
    data = _shift_rhs_data(label, i)
    if data is None:
        return QSeries.zero()
    c, e, sign, off, n = data
    fin = finite_product(sign, off, 1, n).scale(c).shift(e)
    return product_to(N, [lambda a: fin, lambda a: infinite_product([(sign, off, 1, 1)], a)])


def shift_identity_poly(label: str, i: int, side: str) -> QSeries:
    """Either side divided by the common tail ``(sign q^t; q)_inf``: an exact Laurent polynomial.

    ``t`` is where the closed form's infinite factor starts, so the left side
    reduces to the finite product ``(sign q^{offset}; q)_{t - offset}``.
    """
    sign, off = _shift_data(label, i)
    data = _shift_rhs_data(label, i)
    if data is None:
        # the left side contains the factor 1 - q^0
        return QSeries.zero()
    c, e, _, roff, n = data
    if side == "rhs":
        return finite_product(sign, roff, 1, n).scale(c).shift(e)
    if side != "lhs":
        raise ValueError("side must be 'lhs' or 'rhs'")
    return finite_product(sign, off, 1, int(roff - off))


def _shift_data(label, i):
    if label not in SHIFT_IDENTITIES:
        raise ValueError(f"unknown shift identity {label!r}")
    if not isinstance(i, int) or i < 0:
        raise ValueError("i must be a natural number")
    sign, off = SHIFT_IDENTITIES[label]
    return sign, off(i)


# ----------------------------------------------------------------------
# theta recombinations

# case -> (tadpole exponents in base q^4, Z index, q-power, (-q^o; q^4) offset, theta order)
CHI4_CASES = {
    1: ((0, 0, 0, 0), 1, 0, 2, (0, 1)),
    2: ((0, -4, 4, 0), 2, -1, 2, (1, 0)),
    3: ((0, 0, 0, 2), 3, 0, 4, (0, 1)),
    4: ((4, -4, 4, 0), 4, -1, 2, (1, 0)),
    5: ((4, -4, 4, -2), 5, -1, 0, (1, 0)),
}


def chi4_tadpole(case: int, base=4) -> TadpoleSpec:
    """The rank four tadpole sum of ``case``; ``base=2`` gives the ``q^2`` form."""
    e, *_ = _chi4_case(case)
    s = as_rational(base) / 4
    return TadpoleSpec(4, tuple(s * x for x in e), base)


def _chi4_case(case):
    if case not in CHI4_CASES:
        raise ValueError("chi4 case must be 1..5")
    return CHI4_CASES[case]


def _theta(j):
    return theta0 if j == 0 else theta1


def chi4_theta_rhs(case: int, accuracy) -> QSeries:
    """``q^s (-q^o;q^4)_inf / (q^4;q^4)_inf * (Z^{(0)} theta_a + Z^{(1)} theta_b)``."""
    _, k, s, o, (ta, tb) = _chi4_case(case)
    N = as_accuracy(accuracy)
    z0, z1 = FamilyIndex("Zsplit", k, 0), FamilyIndex("Zsplit", k, 1)
    # Z parts have valuation >= 0 and theta_1 has valuation 1
    inner = lambda a: (  # noqa: E731
        product_to(a, [lambda b: family_sum(z0, b), _theta(ta)])
        + product_to(a, [lambda b: family_sum(z1, b), _theta(tb)])
    )
    makers = [
        lambda a: make_monomial(1, s, INF),
        lambda a: infinite_pochhammer(-1, o, 4, a),
        lambda a: J(4, a) ** -1,
        inner,
    ]
    return product_to(N, makers)


CHI5_CASES = ((0, 0, F(0)), (1, 1, F(1, 2)), (-1, -1, F(0)), (0, 0, F(1, 2)), (0, -1, F(0)), (1, 0, F(1, 2)))


def chi5_tadpole(a, b, c) -> TadpoleSpec:
    """``S(a,b,c) = chi_5(q^{4a}, q^{-4a}, q^{4b}, q^{-4b}, q^{4c}; q^4)``."""
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    return TadpoleSpec(5, (4 * a, -4 * a, 4 * b, -4 * b, 4 * c), 4)


def _gamma_index(a, b, c) -> int:
    g = (2 * b - 2 * a, 4 * c - 2 * b)
    for k, v in GAMMA.items():
        if g == v:
            return k
    raise ValueError(f"(a,b,c) = {(a, b, c)} does not match any of the H families")


def chi5_theta_rhs(a, b, c, accuracy) -> QSeries:
    """``S(a,b,c)`` from the ``H``-and-theta decomposition.

    Needs integers ``a, b`` with ``(2b - 2a, 4c - 2b)`` equal to one of the
    ``gamma_k``; this covers the six cases in :data:`CHI5_CASES`.
    """
    a, b, c = as_rational(a), as_rational(b), as_rational(c)
    if a.denominator != 1 or b.denominator != 1:
        raise ValueError("a and b must be integers")
    a, b = int(a), int(b)
    k = _gamma_index(a, b, c)
    N = as_accuracy(accuracy)
    t0, t1 = (a + b) % 2, (a + b + 1) % 2
    sgn = 1 if a % 2 == 0 else -1

    def inner(acc):
        h0 = family_sum(FamilyIndex("H", k, t0), acc)
        ht0 = family_sum(FamilyIndex("Ht", k, t0), acc).scale(sgn)
        half = F(1, 2)
        return (
            product_to(acc, [lambda x: (h0 + ht0).scale(half), lambda x: theta0(x) ** 2])
            + product_to(acc, [lambda x: (h0 - ht0).scale(half), lambda x: theta1(x) ** 2])
            + product_to(
                acc,
                [lambda x: family_sum(FamilyIndex("H", k, t1), x), lambda x: theta0(x) * theta1(x)],
            )
        )

    makers = [
        lambda x: make_monomial(1, -a * a - b * b, INF),
        lambda x: infinite_pochhammer(-1, 2 + 4 * c, 4, x),
        lambda x: J(4, x) ** -2,
        inner,
    ]
    return product_to(N, makers)


def s_scaling(a1, b1, c1, a2, b2, c2, accuracy) -> QSeries:
    """``S(a1,b1,c1)`` obtained from ``S(a2,b2,c2)`` by the scaling relation."""
    a1, b1, c1, a2, b2, c2 = (as_rational(v) for v in (a1, b1, c1, a2, b2, c2))
    if any(v.denominator != 1 for v in (a1, b1, a2, b2)) or (c1 - c2).denominator != 1:
        raise ValueError("a, b must be integers and c1 - c2 an integer")
    if not (a1 - a2 == b1 - b2 == 2 * (c1 - c2)):
        raise ValueError("need a1 - a2 = b1 - b2 = 2 (c1 - c2)")
    N = as_accuracy(accuracy)
    e = a2 * a2 + b2 * b2 - a1 * a1 - b1 * b1
    makers = [
        lambda x: make_monomial(1, e, INF),
        lambda x: infinite_pochhammer(-1, 2 + 4 * c1, 4, x),
        lambda x: infinite_pochhammer(-1, 2 + 4 * c2, 4, x).invert(x),
        lambda x: chi(chi5_tadpole(a2, b2, c2), x),
    ]
    return product_to(N, makers)


CHI3_CASES = ((-1, F(-1, 2)), (-2, F(-1, 2)), (0, F(0)), (-1, F(0)), (1, F(1, 2)), (0, F(1, 2)))


def _rogers_part(d, parity, accuracy) -> QSeries:
    """Closed forms of the even and odd parts of ``sum q^{n^2/4 + d n}/(q;q)_n``."""
    N = as_accuracy(accuracy)
    if d == 0:
        data = {0: (0, [(2, 10), (8, 10), (10, 10), (6, 20), (14, 20)]),
                1: (F(1, 4), [(3, 10), (7, 10), (10, 10), (4, 20), (16, 20)])}
    else:
        data = {0: (0, [(1, 10), (9, 10), (10, 10), (8, 20), (12, 20)]),
                1: (F(3, 4), [(4, 10), (6, 10), (10, 10), (2, 20), (18, 20)])}
    s, facs = data[parity]
    return product_to(
        N,
        [
            lambda x: make_monomial(1, s, INF),
            lambda x: infinite_product([(1, o, m, 1) for o, m in facs], x),
            lambda x: J(1, x) ** -1,
        ],
    )


def rogers_sum(d, parity, accuracy) -> QSeries:
    """``sum_{n = parity (2)} q^{n^2/4 + d n}/(q;q)_n`` computed directly."""
    d = as_rational(d)
    ls = LatticeSum(
        quad=((F(1, 2),),), linear=(d,), lower=(0,), factors=(qpoch_inverse(1, (1,)),),
        parities=(((1,), parity),),
    )
    return evaluate(ls, as_accuracy(accuracy))


def chi3_theta_rhs(a: int, c, accuracy) -> QSeries:
    """``chi_3(q^a, q^{-a}, q^c; q)`` from the theta split and the Rogers identities."""
    c = as_rational(c)
    if (a, c) not in CHI3_CASES:
        raise ValueError(f"(a, c) = {(a, c)} is not one of the six admissible pairs")
    N = as_accuracy(accuracy)
    d = c - F(a, 2)
    pa = a % 2

    def th(which):
        # theta_j(q^{1/4})
        return lambda x: _theta(which)(4 * x).substitute(F(1, 4))

    def inner(x):
        return product_to(x, [th(0), lambda y: _rogers_part(d, pa, y)]) + product_to(
            x, [th(1), lambda y: _rogers_part(d, 1 - pa, y)]
        )

    makers = [
        lambda x: make_monomial(1, -F(a * a, 4), INF),
        lambda x: infinite_pochhammer(-1, F(1, 2) + c, 1, x),
        lambda x: J(1, x) ** -1,
        inner,
    ]
    return product_to(N, makers)


__all__ = [
    "ALPHA",
    "BETA",
    "GAMMA",
    "A_Z",
    "FamilyIndex",
    "family_lattice",
    "family_sum",
    "RankReductionInstance",
    "ReductionError",
    "reduction_lattice",
    "reduce_even_rhs",
    "reduce_odd_rhs",
    "FINITE_SUM_IDS",
    "finite_sum_length",
    "finite_sum_lhs",
    "finite_sum_rhs",
    "SHIFT_IDENTITIES",
    "shift_identity_lhs",
    "shift_identity_rhs",
    "shift_identity_poly",
    "CHI4_CASES",
    "chi4_tadpole",
    "chi4_theta_rhs",
    "CHI5_CASES",
    "chi5_tadpole",
    "chi5_theta_rhs",
    "s_scaling",
    "CHI3_CASES",
    "chi3_theta_rhs",
    "rogers_sum",
]
