"""Pochhammer symbols, theta functions and Gaussian coefficients.

Conventions follow standard q-series notation: ``(a;q)_n = prod_{k<n} (1 - a q^k)``
and ``(a_1, ..., a_m; q)_n`` is the product of the individual symbols.  A
symbol is described by :class:`ProductSpec` with ``a = sign * q^offset``.

Infinite products are only built directly when ``offset > 0``; products such
as ``(q^{-3/2}; q)_inf`` go through :func:`pochhammer_shift`, which rewrites
``(a q^{-n}; q)_inf`` as ``(-a)^n q^{-n(n+1)/2} (a;q)_inf (q/a;q)_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import _dense
from .lattice import square_interval
from .series import INF, QSeries, SeriesError, as_accuracy, as_rational

INFINITY = None  # length marker for infinite products


@dataclass(frozen=True)
class ProductSpec:
    """``(sign * q^offset; q^step)_length``; ``length=None`` means infinite."""

    sign: int
    offset: Fraction
    step: Fraction = Fraction(1)
    length: Optional[int] = INFINITY

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "offset", as_rational(self.offset))
        object.__setattr__(self, "step", as_rational(self.step))
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.length is not None and (not isinstance(self.length, int) or self.length < 0):
            raise ValueError("length must be a natural number or None for infinity")

    @property
    def is_infinite(self) -> bool:
        return self.length is None


@dataclass(frozen=True)
class ThetaSpec:
    """``theta(z) = sum_n q^(base n^2/2) z^n`` with ``z = sign * q^offset``."""

    sign: int
    offset: Fraction
    base: Fraction = Fraction(1)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "offset", as_rational(self.offset))
        object.__setattr__(self, "base", as_rational(self.base))
        if self.base <= 0:
            raise ValueError("theta base must be positive")


# ----------------------------------------------------------------------
# dense helpers


def _grid(*values) -> int:
    den = 1
    for v in values:
        if v is None or v == INF:
            continue
        den = math.lcm(den, as_rational(v).denominator)
    return den


def infinite_product(factors: Sequence[tuple[int, Fraction, Fraction, int]], accuracy) -> QSeries:
    """``prod (sign q^offset; q^step)_inf ** power`` below ``accuracy``.

    Every offset must be positive.  Works on a single dense window, so the cost
    is linear in the accuracy per factor of the expansion.
    """
    N = as_accuracy(accuracy)
    if N == INF:
        raise SeriesError("infinite products need a finite accuracy")
    facs = [(s, as_rational(o), as_rational(st), p) for s, o, st, p in factors]
    for s, o, st, p in facs:
        if o <= 0:
            raise SeriesError(f"infinite product with offset {o} <= 0; use pochhammer_shift")
        if st <= 0:
            raise SeriesError("product step must be positive")
    den = _grid(N, *[o for _, o, _, _ in facs], *[st for _, _, st, _ in facs])
    top = math.ceil(N * den)
    if top <= 0:
        return QSeries.zero(N)
    vals = [1] + [0] * (top - 1)
    for s, o, st, p in facs:
        a, step = int(o * den), int(st * den)
        d = a
        while d < top:
            if p > 0:
                for _ in range(p):
                    vals = _dense.mul_binomial(vals, -s, d)
            else:
                for _ in range(-p):
                    vals = _dense.div_binomial(vals, -s, d)
            d += step
    return QSeries.from_dense(den, 0, vals, N)


def finite_product(sign: int, offset, step, length: int) -> QSeries:
    """Exact Laurent polynomial ``(sign q^offset; q^step)_length``."""
    offset, step = as_rational(offset), as_rational(step)
    den = _grid(offset, step)
    poly = {0: 1}
    for k in range(length):
        d = int((offset + k * step) * den)
        nxt = dict(poly)
        for e, c in poly.items():
            v = nxt.get(e + d, 0) - sign * c
            if v:
                nxt[e + d] = v
            else:
                nxt.pop(e + d, None)
        poly = {e: c for e, c in nxt.items() if c}
        if not poly:
            break
    return QSeries({Fraction(e, den): c for e, c in poly.items()})


# ----------------------------------------------------------------------
# public constructors


def pochhammer(spec: ProductSpec, accuracy=INF) -> QSeries:
    """Expand ``(sign q^offset; q^step)_length``.

    Finite symbols are returned exactly (accuracy ``INF``); infinite symbols need
    ``offset > 0`` and a finite ``accuracy``.
    """
    if spec.length is not None:
        return finite_product(spec.sign, spec.offset, spec.step, spec.length)
    if spec.offset <= 0:
        raise SeriesError(
            f"(a;q)_inf with a = {spec.sign}q^{spec.offset} is not a power series; use pochhammer_shift"
        )
    return infinite_product([(spec.sign, spec.offset, spec.step, 1)], accuracy)


def pochhammer_shift(a_sign: int, alpha, n: int, accuracy, step=1) -> QSeries:
    """``(a q^{-n step}; q^step)_inf`` for ``a = a_sign q^alpha`` with ``alpha > 0``.

    Evaluated as ``(-a)^n q^{-step n(n+1)/2} (a; q^step)_inf (q^step/a; q^step)_n``.
    """
    alpha, step = as_rational(alpha), as_rational(step)
    N = as_accuracy(accuracy)
    if n < 0:
        raise ValueError("shift length must be a natural number")
    if alpha <= 0:
        raise SeriesError("pochhammer_shift needs a = ±q^alpha with alpha > 0")
    fin = finite_product(a_sign, step - alpha, step, n)
    lead_exp = n * alpha - step * n * (n + 1) / 2
    lead_coeff = (-a_sign) ** n
    if fin.is_zero():
        return QSeries.zero(INF)
    # valuation of the prefactor times finite part; the infinite product starts at 1
    v = lead_exp + fin.valuation
    inf_part = infinite_product([(a_sign, alpha, step, 1)], N - v)
    return (fin * inf_part).shift(lead_exp).scale(lead_coeff).truncate(N)


def infinite_pochhammer(sign: int, offset, step, accuracy) -> QSeries:
    """``(sign q^offset; q^step)_inf`` for any rational offset.

    Offsets ``<= 0`` are routed through :func:`pochhammer_shift`.
    """
    offset, step = as_rational(offset), as_rational(step)
    if offset > 0:
        return infinite_product([(sign, offset, step, 1)], accuracy)
    n = math.floor(-offset / step) + 1
    return pochhammer_shift(sign, offset + n * step, n, accuracy, step)


def J(m, accuracy) -> QSeries:
    """``J_m = (q^m; q^m)_inf``."""
    m = as_rational(m)
    if m <= 0:
        raise ValueError("J_m needs m > 0")
    return infinite_product([(1, m, m, 1)], accuracy)


def J2(a, m, accuracy) -> QSeries:
    """``J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_inf`` for ``0 < a < m``."""
    a, m = as_rational(a), as_rational(m)
    if not 0 < a < m:
        raise ValueError("J_{a,m} needs 0 < a < m")
    return infinite_product([(1, a, m, 1), (1, m - a, m, 1), (1, m, m, 1)], accuracy)


def theta(spec: ThetaSpec, accuracy) -> QSeries:
    """Bilateral sum ``sum_n sign^n q^(base n^2/2 + offset n)`` below ``accuracy``."""
    N = as_accuracy(accuracy)
    b, o = spec.base, spec.offset
    # base n^2/2 + o n < N  <=>  (n + o/b)^2 < 2N/b + (o/b)^2
    iv = square_interval(-o / b, 2 * N / b + (o / b) ** 2)
    terms: dict[Fraction, int] = {}
    if iv is not None:
        for n in range(iv[0], iv[1] + 1):
            e = b * n * n / 2 + o * n
            c = spec.sign ** (n % 2)
            terms[e] = terms.get(e, 0) + c
    return QSeries(terms, N)


def jtp_product(spec: ThetaSpec, accuracy) -> QSeries:
    """Product side ``(-q^{b/2} z, -q^{b/2}/z, q^b; q^b)_inf`` of the triple product."""
    N = as_accuracy(accuracy)
    b, o, s = spec.base, spec.offset, spec.sign
    o1, o2 = b / 2 + o, b / 2 - o
    # One of o1, o2 may be <= 0; the shifted factor is a Laurent polynomial
    # times a power series, with valuation found from the shift formula.
    parts = []
    need = N
    low = []
    for off in (o1, o2):
        if off > 0:
            low.append(0)
        else:
            n = math.floor(-off / b) + 1
            fin = finite_product(-s, b - (off + n * b), b, n)
            if fin.is_zero():
                return QSeries.zero(INF)
            low.append((off + n * b) * n - b * n * (n + 1) / 2 + fin.valuation)
    for off, lv in zip((o1, o2), low):
        other = sum(low) - lv
        parts.append(infinite_pochhammer(-s, off, b, need - other))
    parts.append(J(b, need - sum(low)))
    out = parts[0] * parts[1] * parts[2]
    return out.truncate(N)


def phi(accuracy) -> QSeries:
    """``phi(q) = sum_{n in Z} q^{n^2}``."""
    return theta(ThetaSpec(1, 0, 2), accuracy)


def psi(accuracy) -> QSeries:
    """``psi(q) = sum_{n >= 0} q^{n(n+1)/2}``."""
    N = as_accuracy(accuracy)
    terms = {}
    n = 0
    while n * (n + 1) // 2 < N:
        terms[n * (n + 1) // 2] = 1
        n += 1
    return QSeries(terms, N)


def theta0(accuracy) -> QSeries:
    """``theta_0(q) = sum_i q^{(2i)^2} = phi(q^4)``."""
    return theta(ThetaSpec(1, 0, 8), accuracy)


def theta1(accuracy) -> QSeries:
    """``theta_1(q) = sum_i q^{(2i+1)^2} = 2q psi(q^8)``."""
    # (2i+1)^2 = 4i^2 + 4i + 1
    return theta(ThetaSpec(1, 4, 8), as_accuracy(accuracy) - 1).shift(1)


@lru_cache(maxsize=4096)
def _qbinom_dense(n: int, m: int) -> tuple:
    if m < 0 or m > n:
        return ()
    if m == 0 or m == n:
        return (1,)
    a = _qbinom_dense(n - 1, m - 1)
    b = _qbinom_dense(n - 1, m)
    size = m * (n - m) + 1
    out = [0] * size
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + m] += c
    return tuple(out)


def qbinom(n: int, m: int, accuracy=INF) -> QSeries:
    """Gaussian coefficient ``[n, m]_q`` (zero outside ``0 <= m <= n``)."""
    if n < 0:
        return QSeries.zero()
    vals = _qbinom_dense(n, m)
    s = QSeries({i: c for i, c in enumerate(vals) if c})
    return s.truncate(accuracy) if as_accuracy(accuracy) != INF else s


def qpoch_q(n: int, base=1) -> QSeries:
    """``(q^base; q^base)_n`` exactly."""
    return finite_product(1, base, base, n)
