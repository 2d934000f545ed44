"""Exact enumeration of weighted lattice sums.

Every multi-sum in this package has the shape

    scalar * sum_y  (-1)^(sigma . y) * q^(P(y)) * prod_f F_f(idx_f(y))

over integer points ``y`` subject to lower bounds and parity conditions, where

* ``P(y) = 1/2 y_Q^T A y_Q + b . y + c`` with ``A`` positive definite on the
  leading *quadratic* coordinates ``y_Q`` and the remaining *linear*
  coordinates entering only through ``b`` with positive slope and a lower
  bound;
* every factor ``F_f(n) = (sign q^offset; q^step)_n ** power`` has constant term
  0 or 1, so it never lowers the valuation of a term, and ``idx_f`` is an
  affine function of ``y`` that must be nonnegative.

Points are enumerated depth first.  Quadratic coordinates are fixed from last
to first along an exact ``LDL^T`` factorisation of ``A``; the admissible values
of each coordinate form an integer interval obtained exactly from the remaining
exponent budget.  Within an interval the terms are summed by a Horner scheme
on dense coefficient windows, so passing from one point to the next costs only
the few elementary operations that turn a term into its neighbour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _dense
from .series import QSeries, as_accuracy, as_rational, INF


class NotPositiveDefinite(ValueError):
    """The quadratic part of a lattice sum is not positive definite."""


@dataclass(frozen=True)
class Factor:
    """``(sign * q^offset; q^step)_{idx(y)} ** power`` with ``idx`` affine in y."""

    sign: int
    offset: Fraction
    step: Fraction
    power: int
    index: tuple[int, ...]
    index_const: int = 0

    def __post_init__(self):
        object.__setattr__(self, "offset", as_rational(self.offset))
        object.__setattr__(self, "step", as_rational(self.step))
        object.__setattr__(self, "index", tuple(int(v) for v in self.index))
        if self.sign not in (1, -1):
            raise ValueError("factor sign must be +1 or -1")
        if self.step <= 0:
            raise ValueError("factor step must be positive")
        if self.offset < 0:
            raise ValueError("factor offsets must be nonnegative inside lattice sums")
        if self.offset == 0 and self.sign == 1 and self.power < 0:
            raise ZeroDivisionError("division by (1;q)_n")


def qpoch_inverse(base, index, const=0, power=1) -> Factor:
    """``1 / (q^base; q^base)_{idx}`` raised to ``power``."""
    base = as_rational(base)
    return Factor(1, base, base, -power, tuple(index), const)


@dataclass(frozen=True)
class LatticeSum:
    """Data of a weighted lattice sum; see the module docstring."""

    quad: tuple[tuple[Fraction, ...], ...]
    linear: tuple[Fraction, ...]
    const: Fraction = Fraction(0)
    lower: tuple = ()
    factors: tuple[Factor, ...] = ()
    parities: tuple[tuple[tuple[int, ...], int], ...] = ()
    signs: tuple[int, ...] = ()
    scalar: Fraction = Fraction(1)

    def __post_init__(self):
        quad = tuple(tuple(as_rational(x) for x in row) for row in self.quad)
        linear = tuple(as_rational(x) for x in self.linear)
        dim = len(linear)
        dq = len(quad)
        if any(len(row) != dq for row in quad):
            raise ValueError("quadratic matrix must be square")
        if dq > dim:
            raise ValueError("more quadratic coordinates than coordinates")
        for i in range(dq):
            for j in range(dq):
                if quad[i][j] != quad[j][i]:
                    raise ValueError("quadratic matrix must be symmetric")
        lower = tuple(self.lower) if self.lower else (None,) * dim
        signs = tuple(self.signs) if self.signs else (0,) * dim
        if len(lower) != dim or len(signs) != dim:
            raise ValueError("lower bounds and signs must have one entry per coordinate")
        for i in range(dq, dim):
            if lower[i] is None or linear[i] <= 0:
                raise ValueError("linear coordinates need a lower bound and a positive slope")
            if lower[i] < 0:
                raise ValueError("linear coordinates must be bounded below by a natural number")
        for f in self.factors:
            if len(f.index) != dim:
                raise ValueError("factor index has the wrong length")
        for vec, _ in self.parities:
            if len(vec) != dim:
                raise ValueError("parity vector has the wrong length")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "const", as_rational(self.const))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "scalar", as_rational(self.scalar))
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(
            self, "parities", tuple((tuple(int(v) for v in vec), int(r) % 2) for vec, r in self.parities)
        )
        ldl(quad)  # raises when not positive definite

    @property
    def dim(self) -> int:
        return len(self.linear)

    @property
    def quad_dim(self) -> int:
        return len(self.quad)

    def exponent(self, y: Sequence[int]) -> Fraction:
        dq = self.quad_dim
        val = self.const + sum(b * v for b, v in zip(self.linear, y))
        for i in range(dq):
            for j in range(dq):
                val += Fraction(1, 2) * self.quad[i][j] * y[i] * y[j]
        return val


@dataclass(frozen=True)
class LDL:
    """Exact factorisation ``A = L diag(D) L^T`` with shift and floor."""

    L: tuple[tuple[Fraction, ...], ...]
    D: tuple[Fraction, ...]
    shift: tuple[Fraction, ...] = ()
    floor: Fraction = Fraction(0)

    def reconstruct(self) -> list[list[Fraction]]:
        n = len(self.D)
        return [
            [sum(self.L[i][k] * self.D[k] * self.L[j][k] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]


def ldl(A, B=None, C=0) -> LDL:
    """Exact ``LDL^T`` of a symmetric rational matrix.

    With ``B`` and ``C`` given, also returns ``shift = A^{-1} B`` and
    ``floor = C - 1/2 B^T A^{-1} B`` so that
    ``1/2 n^T A n + n^T B + C = 1/2 (n+shift)^T A (n+shift) + floor``.

    Raises :class:`NotPositiveDefinite` when a pivot is not positive.
    """
    A = [[as_rational(x) for x in row] for row in A]
    n = len(A)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        d = A[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if d <= 0:
            raise NotPositiveDefinite(f"pivot {j} equals {d}; matrix is not positive definite")
        D[j] = d
        for i in range(j + 1, n):
            L[i][j] = (A[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / d
    shift: tuple = ()
    floor = as_rational(C)
    if B is not None:
        B = [as_rational(x) for x in B]
        # solve L D L^T s = B
        z = [Fraction(0)] * n
        for i in range(n):
            z[i] = B[i] - sum(L[i][k] * z[k] for k in range(i))
        w = [z[i] / D[i] for i in range(n)]
        s = [Fraction(0)] * n
        for i in reversed(range(n)):
            s[i] = w[i] - sum(L[k][i] * s[k] for k in range(i + 1, n))
        shift = tuple(s)
        floor = floor - Fraction(1, 2) * sum(b * v for b, v in zip(B, s))
    return LDL(tuple(map(tuple, L)), tuple(D), shift, floor)


def is_positive_definite(A) -> bool:
    try:
        ldl(A)
    except NotPositiveDefinite:
        return False
    return True


def square_interval(center: Fraction, radius_sq: Fraction) -> tuple[int, int] | None:
    """Integers ``t`` with ``(t - center)^2 < radius_sq``, as ``(lo, hi)`` or None."""
    if radius_sq <= 0:
        return None
    r = math.isqrt(math.floor(radius_sq)) + 1
    lo = math.floor(center) - r
    hi = math.ceil(center) + r
    while lo <= hi and (lo - center) ** 2 >= radius_sq:
        lo += 1
    while hi >= lo and (hi - center) ** 2 >= radius_sq:
        hi -= 1
    if lo > hi:
        return None
    return lo, hi


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Plan:
    """Per-level data for one evaluation, all in integer arithmetic.

    Exponents are measured in grid units ``1/den``.  The pruning certificate
    uses the ``LDL^T`` form scaled by integers: with ``Z_v = K z_v`` and
    ``Dn_v = M D_v`` the condition ``sum 1/2 D_v z_v^2 < budget`` becomes
    ``sum Dn_v Z_v^2 < W`` with ``W`` an integer.
    """

    def __init__(self, ls: LatticeSum, slack: int = 0):
        self.ls = ls
        dim, dq = ls.dim, ls.quad_dim
        self.dim = dim
        self.dq = dq
        self.slack = slack
        order = list(range(dq - 1, -1, -1)) + list(range(dq, dim))
        self.order = order
        pos = {v: j for j, v in enumerate(order)}
        den = 1
        for i in range(dq):
            den = math.lcm(den, (ls.quad[i][i] / 2).denominator)
            for j in range(i + 1, dq):
                den = math.lcm(den, ls.quad[i][j].denominator)
        for b in ls.linear:
            den = math.lcm(den, b.denominator)
        den = math.lcm(den, ls.const.denominator)
        for f in ls.factors:
            den = math.lcm(den, f.offset.denominator, f.step.denominator)
        self.den = den
        self.c0 = int(ls.const * den)
        # per-level exponent pieces: sq * t^2 + (lin + sum cross_u * y_u) * t
        self.sq = []
        self.lin = []
        self.cross = []
        for j, v in enumerate(order):
            self.sq.append(int(ls.quad[v][v] / 2 * den) if v < dq else 0)
            self.lin.append(int(ls.linear[v] * den))
            cr = []
            if v < dq:
                for u in range(dq):
                    if u != v and pos[u] < j and ls.quad[u][v] != 0:
                        cr.append((u, int(ls.quad[u][v] * den)))
            self.cross.append(cr)
        self.lower = [ls.lower[v] for v in order]
        self.signs = [ls.signs[v] % 2 for v in order]
        # factors, attached to the level that completes their index
        self.level_factors: list[list] = [[] for _ in range(dim)]
        self.const_factors = []
        for f in ls.factors:
            ops = (-f.sign, int(f.offset * den), int(f.step * den), f.power)
            support = [v for v in range(dim) if f.index[v] != 0]
            if not support:
                self.const_factors.append((f.index_const, ops))
                continue
            v = max(support, key=lambda u: pos[u])
            kappa = f.index[v]
            if kappa <= 0:
                raise ValueError("factor index must increase with the coordinate that completes it")
            others = [(u, f.index[u]) for u in support if u != v]
            self.level_factors[pos[v]].append((kappa, f.index_const, others, ops))
        self.level_parity: list[list] = [[] for _ in range(dim)]
        self.infeasible = False
        for vec, res in ls.parities:
            support = [v for v in range(dim) if vec[v] % 2]
            if not support:
                if res % 2:
                    self.infeasible = True
                continue
            v = max(support, key=lambda u: pos[u])
            others = [(u, vec[u]) for u in support if u != v]
            self.level_parity[pos[v]].append((res, others))
        # minimal contribution of linear coordinates at levels >= j (grid units)
        self.linlow = [0] * (dim + 2)
        acc = 0
        for j in range(dim - 1, -1, -1):
            v = order[j]
            if v >= dq:
                acc += self.lin[j] * ls.lower[v]
            self.linlow[j] = acc
        # integer LDL certificate
        if dq:
            fac = ldl(ls.quad, ls.linear[:dq], ls.const)
            L, D, sh = fac.L, fac.D, fac.shift
            cconst = [sh[v] + sum(L[i][v] * sh[i] for i in range(v + 1, dq)) for v in range(dq)]
            K = 1
            for v in range(dq):
                K = math.lcm(K, cconst[v].denominator)
                for i in range(v + 1, dq):
                    K = math.lcm(K, L[i][v].denominator)
            M = 2
            for d in D:
                M = math.lcm(M, d.denominator)
            self.K = K
            self.Dn = {v: int(D[v] * M) for v in range(dq)}
            self.Cc = {v: int(cconst[v] * K) for v in range(dq)}
            self.Lk = {v: [(i, int(L[i][v] * K)) for i in range(v + 1, dq) if L[i][v] != 0] for v in range(dq)}
            self.scale = 2 * M * K * K  # W = scale * (budget in q units)
            self.floor = fac.floor
        else:
            self.floor = ls.const

    def initial_budget(self, N: Fraction) -> int:
        """Integer ``W`` with ``sum Dn Z^2 < W`` iff the quadratic budget holds."""
        room = (N - self.floor) - Fraction(self.linlow[0], self.den)
        return math.ceil(self.scale * room)


def _apply_factor(vals: list, ops, i_from: int, i_to: int) -> list:
    """Multiply the window by ``prod_{i_from <= i < i_to} (1 + c q^(a + s i))^p``."""
    c, a, s, p = ops
    n = len(vals)
    if not n:
        return vals
    for i in range(i_from, i_to):
        d = a + s * i
        if d >= n and d > 0:
            break
        if p > 0:
            for _ in range(p):
                vals = _dense.mul_binomial(vals, c, d)
        else:
            for _ in range(-p):
                vals = _dense.div_binomial(vals, c, d)
    return vals


def evaluate(ls: LatticeSum, accuracy, slack: int = 0) -> QSeries:
    """Sum the lattice series below ``accuracy`` (an exact rational).

    ``slack`` widens every interval of an unbounded (integer) quadratic
    coordinate by that many points on each side; the result must not change,
    which is how the tests certify the bound.
    """
    N = as_accuracy(accuracy)
    if N == INF:
        raise ValueError("a lattice sum needs a finite accuracy")
    plan = _Plan(ls, slack)
    den = plan.den
    top = math.ceil(N * den)
    if plan.infeasible:
        return QSeries.zero(N)
    W = plan.initial_budget(N) if ls.quad_dim else 0
    y = [0] * ls.dim
    start, vals = _level(plan, 0, y, W, top - plan.c0)
    start, vals = _dense.shift(start, vals, plan.c0, top)
    for const, ops in plan.const_factors:
        if const < 0:
            return QSeries.zero(N)
        vals = _apply_factor(vals, ops, 0, const)
    result = QSeries.from_dense(den, start, vals, N)
    if ls.scalar != 1:
        result = result.scale(ls.scalar)
    return result


def _level(plan: _Plan, j: int, y: list, W: int, top: int):
    """Window below ``top`` of the sum over all completions at levels >= j.

    ``W`` is the integer pruning budget left for the quadratic coordinates.
    """
    if j == plan.dim:
        return (0, [1] + [0] * (top - 1)) if top > 0 else (top, [])
    v = plan.order[j]
    is_quad = v < plan.dq
    # admissible interval
    if is_quad:
        if W <= 0:
            return top, []
        Dn = plan.Dn[v]
        xmax = math.isqrt((W - 1) // Dn)
        K = plan.K
        C = plan.Cc[v]
        for i, l in plan.Lk[v]:
            C += l * y[i]
        lo = -((xmax + C) // K)
        hi = (xmax - C) // K
        if plan.lower[j] is None and plan.slack:
            lo -= plan.slack
            hi += plan.slack
    else:
        room = top - plan.linlow[j + 1]
        if room <= 0:
            return top, []
        hi = (room - 1) // plan.lin[j]
        lo = plan.lower[j]
    low = plan.lower[j]
    if low is not None and lo < low:
        lo = low
    facs = []
    for kappa, const, others, ops in plan.level_factors[j]:
        delta = const
        for u, cf in others:
            delta += cf * y[u]
        need = -(delta // kappa)  # ceil(-delta / kappa)
        if need > lo:
            lo = need
        facs.append((kappa, delta, ops))
    step = 1
    for res, others in plan.level_parity[j]:
        want = res
        for u, cf in others:
            want -= cf * y[u]
        want %= 2
        if step == 2:
            if (lo - want) % 2:
                return top, []
            continue
        if (lo - want) % 2:
            lo += 1
        step = 2
    if lo > hi:
        return top, []
    hi -= (hi - lo) % step
    sq = plan.sq[j]
    lin_t = plan.lin[j]
    for u, cf in plan.cross[j]:
        lin_t += cf * y[u]
    sgn = plan.signs[j]
    if is_quad:
        last_quad = v == 0
        C0 = plan.Cc[v]
        for i, l in plan.Lk[v]:
            C0 += l * y[i]
        K = plan.K
        Dn = plan.Dn[v]
    S_start, S = top, []
    prev_e = 0
    t = hi
    while t >= lo:
        e_t = sq * t * t + lin_t * t
        y[v] = t
        if is_quad:
            if last_quad:
                Wc = 0
            else:
                Z = K * t + C0
                Wc = W - Dn * Z * Z
        else:
            Wc = 0
        c_start, c_vals = _level(plan, j + 1, y, Wc, top - e_t)
        if S:
            S_start, S = _dense.shift(S_start, S, prev_e - e_t, top - e_t)
            if sgn and step % 2:
                S = [-x for x in S]
            for kappa, delta, ops in facs:
                S = _apply_factor(S, ops, kappa * t + delta, kappa * (t + step) + delta)
            if c_vals:
                S_start, S = _dense.add_into(S_start, S, c_start, c_vals)
        elif c_vals:
            S_start, S = c_start, c_vals
        prev_e = e_t
        t -= step
    y[v] = 0
    if not S:
        return top, []
    t = lo
    S_start, S = _dense.shift(S_start, S, prev_e, top)
    if sgn and t % 2:
        S = [-x for x in S]
    for kappa, delta, ops in facs:
        S = _apply_factor(S, ops, 0, kappa * t + delta)
    return S_start, S


def brute_force(ls: LatticeSum, accuracy, box: int | None = None) -> QSeries:
    """Reference evaluation by scanning a certified box of lattice points.

    Each term is expanded naively with :class:`QSeries` arithmetic.  The box
    bound for quadratic coordinates comes from the diagonal of ``A^{-1}``: on
    the ellipsoid ``1/2 (y+s)^T A (y+s) < R`` each coordinate satisfies
    ``|y_i + s_i| < sqrt(2 R (A^{-1})_{ii})``.
    """
    from itertools import product as iproduct

    from .series import mul

    N = as_accuracy(accuracy)
    dim, dq = ls.dim, ls.quad_dim
    fac = ldl(ls.quad, ls.linear[:dq], ls.const) if dq else None
    floor = fac.floor if fac else ls.const
    linlow = sum(ls.linear[i] * ls.lower[i] for i in range(dq, dim))
    R = N - floor - linlow
    ranges = []
    inv = _inverse(ls.quad) if dq else []
    for i in range(dim):
        if i < dq:
            rad2 = 2 * R * inv[i][i]
            if rad2 <= 0:
                return QSeries.zero(N).scale(1)
            r = math.isqrt(math.ceil(rad2)) + 1
            lo, hi = math.floor(-fac.shift[i]) - r, math.ceil(-fac.shift[i]) + r
        else:
            lo = ls.lower[i]
            hi = lo + math.ceil(R / ls.linear[i]) + 1
        if box is not None:
            hi = max(hi, (ls.lower[i] or 0) + box)
        if ls.lower[i] is not None:
            lo = max(lo, ls.lower[i])
        ranges.append(range(lo, hi + 1))
    total = QSeries.zero(N)
    for y in iproduct(*ranges):
        if any(sum(a * b for a, b in zip(vec, y)) % 2 != res for vec, res in ls.parities):
            continue
        if any(sum(a * b for a, b in zip(f.index, y)) + f.index_const < 0 for f in ls.factors):
            continue
        e = ls.exponent(y)
        if e >= N:
            continue
        term = QSeries({e: (-1) ** (sum(s * v for s, v in zip(ls.signs, y)) % 2)}, N)
        for f in ls.factors:
            n = sum(a * b for a, b in zip(f.index, y)) + f.index_const
            for i in range(n):
                binom = QSeries({0: 1, f.offset + f.step * i: -f.sign})
                if f.power > 0:
                    for _ in range(f.power):
                        term = mul(term, binom)
                else:
                    for _ in range(-f.power):
                        term = mul(term, binom.invert(N - e + 1))
            term = term.truncate(N)
        total = total + term
    return total.scale(ls.scalar)


def _inverse(A) -> list[list[Fraction]]:
    n = len(A)
    M = [[as_rational(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]
