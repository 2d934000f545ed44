"""Nahm sums and generalized tadpole sums.

For a positive definite rational matrix ``A``, vector ``B`` and scalar ``C`` the
Nahm sum is

    f_{A,B,C}(q) = sum_{n >= 0} q^(1/2 n^T A n + n^T B + C) / ((q)_{n_1} ... (q)_{n_r}),

and the generalized tadpole sum ``chi_r(x_1, ..., x_r; q)`` is the Nahm sum of
the tadpole Cartan matrix ``T_r`` weighted by ``x_1^{n_1} ... x_r^{n_r}``.  Here
every ``x_i`` is a monomial ``q^{e_i}``.  Exponents ``e_i`` are measured in
powers of ``q`` itself, also when the sum is taken in a base ``q^k``:
``chi_4(q^2, q^{-2}, q^2, 1; q^2)`` is ``TadpoleSpec(4, (2, -2, 2, 0), 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import Factor, LatticeSum, NotPositiveDefinite, evaluate, ldl, qpoch_inverse
from .products import J
from .series import QSeries, as_accuracy, as_rational, mul


def _unit(i: int, r: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(r))


@dataclass(frozen=True)
class NahmSpec:
    """Quadratic-form data ``(A, B, C)`` of a Nahm sum evaluated in base ``q^base``."""

    A: tuple[tuple[Fraction, ...], ...]
    B: tuple[Fraction, ...]
    C: Fraction = Fraction(0)
    base: Fraction = Fraction(1)

    def __post_init__(self):
        A = tuple(tuple(as_rational(x) for x in row) for row in self.A)
        B = tuple(as_rational(x) for x in self.B)
        r = len(B)
        if r < 1 or len(A) != r or any(len(row) != r for row in A):
            raise ValueError("A must be an r x r matrix and B a vector of length r >= 1")
        if any(A[i][j] != A[j][i] for i in range(r) for j in range(r)):
            raise ValueError("A must be symmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", as_rational(self.C))
        object.__setattr__(self, "base", as_rational(self.base))
        if self.base <= 0:
            raise ValueError("base must be positive")
        ldl(A)  # raises NotPositiveDefinite

    @property
    def rank(self) -> int:
        return len(self.B)

    def lattice(self) -> LatticeSum:
        k, r = self.base, self.rank
        return LatticeSum(
            quad=tuple(tuple(k * x for x in row) for row in self.A),
            linear=tuple(k * b for b in self.B),
            const=k * self.C,
            lower=(0,) * r,
            factors=tuple(qpoch_inverse(k, _unit(i, r)) for i in range(r)),
        )


@dataclass(frozen=True)
class TadpoleSpec:
    """``chi_rank(q^{e_1}, ..., q^{e_rank}; q^base)``."""

    rank: int
    exponents: tuple[Fraction, ...] = ()
    base: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError("tadpole rank must be a positive integer")
        exps = tuple(as_rational(e) for e in self.exponents) or (Fraction(0),) * self.rank
        if len(exps) != self.rank:
            raise ValueError("need one exponent per coordinate")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "base", as_rational(self.base))
        if self.base <= 0:
            raise ValueError("base must be positive")

    def nahm(self) -> NahmSpec:
        """The Nahm data ``(T_r, e/k, 0)`` in base ``q^k``."""
        k = self.base
        return NahmSpec(tadpole_matrix(self.rank), tuple(e / k for e in self.exponents), 0, k)


def tadpole_matrix(r: int) -> tuple[tuple[Fraction, ...], ...]:
    """Tadpole Cartan matrix ``T_r``: diagonal ``2, ..., 2, 1``, off-diagonal ``-1``."""
    if not isinstance(r, int) or r < 1:
        raise ValueError("tadpole matrix needs r >= 1")
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            if i == j:
                row.append(Fraction(1 if i == r - 1 else 2))
            elif abs(i - j) == 1:
                row.append(Fraction(-1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return tuple(rows)


def quadratic_value(A, n: Sequence[int]) -> Fraction:
    """``1/2 n^T A n``."""
    r = len(n)
    return Fraction(1, 2) * sum(A[i][j] * n[i] * n[j] for i in range(r) for j in range(r))


def x_recursive(n: Sequence[int]) -> Fraction:
    """``X_m`` via ``X_1 = n_1^2/2`` and ``X_m = X_{m-1} + (n_m - n_{m-1})^2/2``."""
    if not n:
        return Fraction(0)
    X = Fraction(n[0] ** 2, 2)
    for i in range(1, len(n)):
        X += Fraction((n[i] - n[i - 1]) ** 2, 2)
    return X


def x_squares(n: Sequence[int]) -> Fraction:
    """``X_m = n_1^2/2 + 1/2 sum_i (n_i - n_{i+1})^2`` (sum of squares form)."""
    if not n:
        return Fraction(0)
    return Fraction(n[0] ** 2, 2) + Fraction(sum((n[i] - n[i + 1]) ** 2 for i in range(len(n) - 1)), 2)


def nahm_sum(spec: NahmSpec, accuracy) -> QSeries:
    """The Nahm sum ``f_{A,B,C}(q^k)`` below ``accuracy``."""
    return evaluate(spec.lattice(), accuracy)


def chi(spec: TadpoleSpec, accuracy) -> QSeries:
    """``chi_r(q^{e_1}, ..., q^{e_r}; q^k)`` through the general Nahm engine."""
    return nahm_sum(spec.nahm(), accuracy)


def chi_direct(spec: TadpoleSpec, accuracy) -> QSeries:
    """Independent evaluation of ``chi_r`` from the sum-of-squares form of ``X_r``.

    Enumerates ``n_1, n_2, ...`` in turn using that every step adds the
    nonnegative amount ``(n_i - n_{i-1})^2/2`` (and ``e_i n_i >= 0``), and expands
    each term with plain series products.  Only nonnegative exponents ``e`` are
    supported; the point is to be simple rather than fast.
    """
    N = as_accuracy(accuracy)
    k, r, e = spec.base, spec.rank, spec.exponents
    if any(x < 0 for x in e):
        raise ValueError("the direct path needs nonnegative exponents")
    M = N / k  # work in base q, substitute at the end
    inv_cache: dict[int, QSeries] = {}

    def inv_poch(n: int) -> QSeries:
        if n not in inv_cache:
            poly = QSeries.constant(1)
            for j in range(1, n + 1):
                poly = mul(poly, QSeries({0: 1, j: -1}))
            inv_cache[n] = poly.invert(M + 1)
        return inv_cache[n]

    total = QSeries.zero(M)

    def rec(i: int, prev: int, partial: Fraction, acc: QSeries):
        nonlocal total
        if i == r:
            total = total + acc.shift(partial).truncate(M)
            return
        n = 0
        while True:
            step = Fraction((n - prev) ** 2, 2) + e[i] / k * n
            if partial + step >= M:
                if n >= prev:
                    break
                n += 1
                continue
            rec(i + 1, n, partial + step, mul(acc, inv_poch(n)).truncate(M - partial - step))
            n += 1

    rec(0, 0, Fraction(0), QSeries.constant(1))
    return total.substitute(k)


def new_repn_lattice(r: int) -> LatticeSum:
    """``sum q^{X_r} (-q^{1/2}; q)_{n_r} / prod (q;q)_{n_i}^2`` as a lattice sum."""
    if r <= 1:
        raise ValueError("the alternative representation needs r > 1")
    factors = [qpoch_inverse(1, _unit(i, r), power=2) for i in range(r)]
    factors.append(Factor(-1, Fraction(1, 2), 1, 1, _unit(r - 1, r)))
    return LatticeSum(
        quad=tadpole_matrix(r), linear=(0,) * r, lower=(0,) * r, factors=tuple(factors)
    )


def new_repn_rhs(r: int, accuracy) -> QSeries:
    """``(q;q)_inf^r sum q^{X_r}(-q^{1/2};q)_{n_r} / prod (q;q)_{n_i}^2``.

    Both the sum and ``(q;q)_inf^r`` have valuation 0, so each is needed only
    below ``accuracy``.
    """
    N = as_accuracy(accuracy)
    s = evaluate(new_repn_lattice(r), N)
    return mul(s, J(1, N) ** r)


__all__ = [
    "NahmSpec",
    "TadpoleSpec",
    "NotPositiveDefinite",
    "tadpole_matrix",
    "quadratic_value",
    "x_recursive",
    "x_squares",
    "nahm_sum",
    "chi",
    "chi_direct",
    "new_repn_lattice",
    "new_repn_rhs",
]
