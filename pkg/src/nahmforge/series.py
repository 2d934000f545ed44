"""Truncated Laurent-Puiseux series over the rationals.

A :class:`QSeries` stores finitely many nonzero rational coefficients keyed by
rational exponents of ``q``, together with an *accuracy*: every coefficient of
an exponent strictly below the accuracy is exact, nothing is known at or above
it.  Polynomials (and the zero polynomial) are exact everywhere and carry
accuracy ``INF``.

Exponents live on a per-series grid ``1/den``; operations between series with
different grids rescale to the least common multiple.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rational = Union[int, Fraction]
Accuracy = Union[Fraction, float]

INF = math.inf


class SeriesError(ValueError):
    """Base class for invalid series constructions and comparisons."""


class AccuracyError(SeriesError):
    """A coefficient was requested at or beyond the known accuracy."""


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def as_accuracy(x) -> Accuracy:
    if x is None or (isinstance(x, float) and x == INF):
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity"):
        return INF
    return as_rational(x)


def norm_coeff(c):
    """Return ``c`` as an int when it is integral, else as a Fraction."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def format_rational(x) -> str:
    if x == INF:
        return "inf"
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _ceil_scaled(acc: Accuracy, den: int):
    """Smallest integer index ``i`` with ``i/den >= acc`` (None for INF)."""
    if acc == INF:
        return None
    return -((-acc.numerator * den) // acc.denominator)


class QSeries:
    """Immutable truncated series ``sum c_e q^e + O(q^accuracy)``."""

    __slots__ = ("_den", "_coeffs", "_acc")

    def __init__(self, terms: Mapping | None = None, accuracy=INF):
        acc = as_accuracy(accuracy)
        items = []
        den = 1
        for e, c in (terms or {}).items():
            if c == 0:
                continue
            e = as_rational(e)
            if acc != INF and e >= acc:
                continue
            items.append((e, norm_coeff(c)))
            den = math.lcm(den, e.denominator)
        coeffs = {}
        for e, c in items:
            k = e.numerator * (den // e.denominator)
            coeffs[k] = coeffs.get(k, 0) + c
        self._den = den
        self._coeffs = {k: c for k, c in coeffs.items() if c != 0}
        self._acc = acc

    @classmethod
    def _raw(cls, den: int, coeffs: dict, acc: Accuracy) -> "QSeries":
        # Trusted constructor: keys are integers over den, no zeros, all below acc.
        s = object.__new__(cls)
        s._den = den
        s._coeffs = coeffs
        s._acc = acc
        return s._reduce()

    @classmethod
    def from_dense(cls, den: int, start: int, values: Iterable, accuracy=INF) -> "QSeries":
        """Build from consecutive coefficients at exponents ``(start + i)/den``."""
        acc = as_accuracy(accuracy)
        top = _ceil_scaled(acc, den)
        coeffs = {}
        for i, c in enumerate(values):
            if c:
                k = start + i
                if top is not None and k >= top:
                    break
                coeffs[k] = norm_coeff(c)
        return cls._raw(den, coeffs, acc)

    def _reduce(self) -> "QSeries":
        den = self._den
        if den == 1:
            return self
        g = den
        for k in self._coeffs:
            g = math.gcd(g, k)
            if g == 1:
                return self
        if g > 1:
            self._coeffs = {k // g: c for k, c in self._coeffs.items()}
            self._den = den // g
        return self

    # ------------------------------------------------------------------
    # inspection

    @property
    def accuracy(self) -> Accuracy:
        return self._acc

    @property
    def is_exact(self) -> bool:
        return self._acc == INF

    @property
    def den(self) -> int:
        return self._den

    @property
    def valuation(self) -> Fraction | None:
        """Lowest exponent with a nonzero coefficient; None for BOTTOM."""
        if not self._coeffs:
            return None
        return Fraction(min(self._coeffs), self._den)

    def _val_bound(self) -> Accuracy:
        # The true valuation is at least this: unknown tail starts at accuracy.
        if self._coeffs:
            return Fraction(min(self._coeffs), self._den)
        return self._acc

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def items(self) -> Iterator[tuple[Fraction, Rational]]:
        den = self._den
        for k in sorted(self._coeffs):
            yield Fraction(k, den), self._coeffs[k]

    @property
    def terms(self) -> dict[Fraction, Rational]:
        return dict(self.items())

    def coefficient(self, e) -> Rational:
        e = as_rational(e)
        if self._acc != INF and e >= self._acc:
            raise AccuracyError(f"coefficient of q^{e} unknown (accuracy {format_rational(self._acc)})")
        k = e * self._den
        if k.denominator != 1:
            return 0
        return self._coeffs.get(k.numerator, 0)

    __getitem__ = coefficient

    def coefficients(self, start, stop, step=1) -> list[Rational]:
        """Coefficients at ``start, start+step, ...`` strictly below ``stop``."""
        start, stop, step = as_rational(start), as_rational(stop), as_rational(step)
        out = []
        e = start
        while e < stop:
            out.append(self.coefficient(e))
            e += step
        return out

    def __repr__(self) -> str:
        return f"QSeries({self})"

    def __str__(self) -> str:
        parts = []
        for e, c in self.items():
            parts.append(f"{format_rational(c)}*q^{_fmt_exp(e)}")
        body = " + ".join(parts) if parts else "0"
        if self._acc != INF:
            body += f" + O(q^{_fmt_exp(self._acc)})"
        return body

    def __eq__(self, other) -> bool:
        # Structural equality: same known terms and same accuracy.
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._acc == other._acc and self.terms == other.terms

    __hash__ = None

    # ------------------------------------------------------------------
    # arithmetic

    def _scaled(self, den: int) -> dict:
        if den == self._den:
            return self._coeffs
        m = den // self._den
        return {k * m: c for k, c in self._coeffs.items()}

    def __neg__(self) -> "QSeries":
        return QSeries._raw(self._den, {k: -c for k, c in self._coeffs.items()}, self._acc)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other)
        acc = min(self._acc, other._acc)
        den = math.lcm(self._den, other._den)
        top = _ceil_scaled(acc, den)
        out = dict(self._scaled(den))
        for k, c in other._scaled(den).items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        if top is not None:
            out = {k: c for k, c in out.items() if k < top}
        return QSeries._raw(den, {k: norm_coeff(c) for k, c in out.items()}, acc)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        """Multiply every coefficient by the rational ``c``."""
        c = norm_coeff(as_rational(c))
        if c == 0:
            return QSeries({}, INF)
        return QSeries._raw(self._den, {k: norm_coeff(v * c) for k, v in self._coeffs.items()}, self._acc)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> "QSeries":
        return self.scale(other)

    def __truediv__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = as_rational(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self.scale(1 / c)
        return mul(self, invert(other))

    def __pow__(self, n: int) -> "QSeries":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else invert(self)
        n = abs(n)
        result = QSeries.constant(1)
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def shift(self, e) -> "QSeries":
        """Multiply by ``q^e``."""
        e = as_rational(e)
        den = math.lcm(self._den, e.denominator)
        d = e.numerator * (den // e.denominator)
        coeffs = {k + d: c for k, c in self._scaled(den).items()}
        acc = self._acc + e if self._acc != INF else INF
        return QSeries._raw(den, coeffs, acc)

    def truncate(self, accuracy) -> "QSeries":
        """Forget everything at or above ``accuracy`` (never raises accuracy)."""
        acc = min(self._acc, as_accuracy(accuracy))
        if acc == self._acc:
            return self
        top = _ceil_scaled(acc, self._den)
        return QSeries._raw(self._den, {k: c for k, c in self._coeffs.items() if k < top}, acc)

    def substitute(self, k) -> "QSeries":
        return substitute_qk(self, k)

    def negate_q(self) -> "QSeries":
        """Substitute ``q -> -q``; only defined for integer exponents."""
        if self._den != 1 or (self._acc != INF and self._acc.denominator != 1):
            raise SeriesError("q -> -q needs integer exponents and accuracy")
        return QSeries._raw(1, {k: (-c if k & 1 else c) for k, c in self._coeffs.items()}, self._acc)

    def twist_i(self, extra: int = 0) -> "QSeries":
        """Return ``i^extra * f(i q)`` for series whose result stays real.

        Every exponent ``e`` must satisfy ``e + extra`` even; the coefficient
        picks up ``(-1)^((e + extra)/2)``.
        """
        if self._den != 1:
            raise SeriesError("q -> iq needs integer exponents")
        out = {}
        for k, c in self._coeffs.items():
            t = k + extra
            if t & 1:
                raise SeriesError(f"q -> iq gives an imaginary coefficient at q^{k}")
            out[k] = -c if (t // 2) & 1 else c
        return QSeries._raw(1, out, self._acc)

    def parity_part(self, residue: int) -> "QSeries":
        """Terms whose (integer) exponent is congruent to ``residue`` mod 2."""
        if self._den != 1:
            raise SeriesError("parity split needs integer exponents")
        return QSeries._raw(1, {k: c for k, c in self._coeffs.items() if (k - residue) % 2 == 0}, self._acc)

    def invert(self, accuracy=None) -> "QSeries":
        return invert(self, accuracy)

    def to_dense(self, den: int, start: int, stop: int) -> list:
        """Coefficients at ``i/den`` for ``start <= i < stop`` (zeros filled)."""
        if den % self._den:
            raise SeriesError("target grid does not refine the series grid")
        m = den // self._den
        out = [0] * max(0, stop - start)
        for k, c in self._coeffs.items():
            i = k * m - start
            if 0 <= i < len(out):
                out[i] = c
        return out

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def constant(cls, c, accuracy=INF) -> "QSeries":
        return make_monomial(c, 0, accuracy)

    @classmethod
    def zero(cls, accuracy=INF) -> "QSeries":
        return cls({}, accuracy)


# ----------------------------------------------------------------------
# functional interface


def make_monomial(c, e, accuracy=INF) -> QSeries:
    """``c * q^e`` known below ``accuracy``."""
    c = as_rational(c)
    e = as_rational(e)
    acc = as_accuracy(accuracy)
    if c == 0:
        return QSeries({}, acc)
    if acc != INF and acc <= e:
        raise SeriesError(f"monomial q^{e} lies at or above its accuracy {acc}")
    return QSeries({e: c}, acc)


def add(f: QSeries, g: QSeries) -> QSeries:
    return f + g


def mul(f: QSeries, g: QSeries) -> QSeries:
    """Cauchy product, truncated to the propagated accuracy.

    The product is exact below ``min(f.acc + val(g), g.acc + val(f))`` where the
    valuation of an inexact zero series is taken to be its accuracy.
    """
    vf, vg = f._val_bound(), g._val_bound()
    acc = min(f._acc + vg, g._acc + vf)
    if acc != INF and not isinstance(acc, Fraction):
        acc = as_accuracy(acc)
    if not f._coeffs or not g._coeffs:
        return QSeries({}, acc)
    den = math.lcm(f._den, g._den)
    top = _ceil_scaled(acc, den)
    fa = sorted(f._scaled(den).items())
    ga = sorted(g._scaled(den).items())
    gmin = ga[0][0]
    out: dict[int, Rational] = {}
    get = out.get
    if top is None:
        for k1, c1 in fa:
            for k2, c2 in ga:
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
    else:
        for k1, c1 in fa:
            if k1 + gmin >= top:
                break
            lim = top - k1
            for k2, c2 in ga:
                if k2 >= lim:
                    break
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
    return QSeries._raw(den, {k: norm_coeff(c) for k, c in out.items() if c}, acc)


def invert(g: QSeries, accuracy=None) -> QSeries:
    """Multiplicative inverse of ``g``.

    The result has valuation ``-v`` and accuracy ``g.accuracy - 2v`` where
    ``v`` is the valuation of ``g``.  Exact inputs (polynomials) need an explicit
    target ``accuracy``; a target also caps the result accuracy otherwise.
    """
    if not g._coeffs:
        raise ZeroDivisionError("inverse of the zero series")
    den = g._den
    v_idx = min(g._coeffs)
    v = Fraction(v_idx, den)
    lead = g._coeffs[v_idx]
    acc = g._acc - 2 * v if g._acc != INF else INF
    if accuracy is not None:
        acc = min(acc, as_accuracy(accuracy))
    if acc == INF:
        if len(g._coeffs) == 1:
            return QSeries._raw(den, {-v_idx: norm_coeff(Fraction(1) / lead)}, INF)
        raise SeriesError("inverting a non-monomial exact series needs a target accuracy")
    # h = g / (lead q^v) = 1 + sum a_j q^{j/den}; invert h below acc + v
    top = _ceil_scaled(acc + v, den)
    if top <= 0:
        return QSeries({}, acc)
    inv_lead = Fraction(1) / lead
    unit = inv_lead.denominator == 1 and abs(inv_lead.numerator) == 1
    tail = []
    for k, c in g._coeffs.items():
        j = k - v_idx
        if 0 < j < top:
            tail.append((j, c * inv_lead if not unit else c * inv_lead.numerator))
    tail.sort()
    u = [0] * top
    u[0] = 1
    for n in range(1, top):
        s = 0
        for j, a in tail:
            if j > n:
                break
            un = u[n - j]
            if un:
                s -= a * un
        u[n] = s
    coeffs = {}
    for n, c in enumerate(u):
        if c:
            coeffs[n - v_idx] = norm_coeff(c * inv_lead) if not unit else c * inv_lead.numerator
    return QSeries._raw(den, coeffs, acc)


def substitute_qk(f: QSeries, k) -> QSeries:
    """Substitute ``q -> q^k`` for a positive rational ``k``."""
    k = as_rational(k)
    if k <= 0:
        raise SeriesError("substitution q -> q^k needs k > 0")
    acc = f._acc * k if f._acc != INF else INF
    terms = {e * k: c for e, c in f.items()}
    return QSeries(terms, acc)


def first_mismatch(f: QSeries, g: QSeries, order) -> tuple[Fraction, Rational, Rational] | None:
    """Smallest exponent below ``order`` where ``f`` and ``g`` differ.

    Raises :class:`AccuracyError` if either side is not known up to ``order``.
    """
    order = as_accuracy(order)
    for name, s in (("left", f), ("right", g)):
        if s._acc < order:
            raise AccuracyError(
                f"{name} side known only below q^{format_rational(s._acc)}, "
                f"cannot compare below q^{format_rational(order)}"
            )
    den = math.lcm(f._den, g._den)
    fs, gs = f._scaled(den), g._scaled(den)
    top = _ceil_scaled(order, den)
    keys = sorted(k for k in set(fs) | set(gs) if top is None or k < top)
    for k in keys:
        a, b = fs.get(k, 0), gs.get(k, 0)
        if a != b:
            return Fraction(k, den), a, b
    return None


def _fmt_exp(e) -> str:
    s = format_rational(e)
    return s if "/" not in s else f"({s})"
