"""Dense coefficient windows used by the hot loops.

A window is a pair ``(start, vals)``: ``vals[i]`` is the coefficient of
``q^((start + i)/D)`` on some grid ``1/D`` fixed by the caller, and everything at
or above ``start + len(vals)`` is unknown.  Coefficients are Python ints or
Fractions.  These helpers never change the top of a window except
:func:`shift`, which moves start and top together.
"""

from __future__ import annotations

from itertools import accumulate


def mul_binomial(vals: list, c, d: int) -> list:
    """Multiply by ``1 + c q^d`` (``d >= 0`` in grid units)."""
    if d == 0:
        f = 1 + c
        if f == 1:
            return vals
        return [f * x for x in vals] if f else [0] * len(vals)
    n = len(vals)
    if d >= n or c == 0:
        return vals
    head = vals[:d]
    if c == -1:
        tail = [x - y for x, y in zip(vals[d:], vals)]
    elif c == 1:
        tail = [x + y for x, y in zip(vals[d:], vals)]
    else:
        tail = [x + c * y for x, y in zip(vals[d:], vals)]
    return head + tail


def div_binomial(vals: list, c, d: int) -> list:
    """Divide by ``1 + c q^d`` with ``d > 0`` (power series in q^d)."""
    if d <= 0:
        if d == 0:
            f = 1 + c
            if f == 0:
                raise ZeroDivisionError("division by the zero factor (1 - 1)")
            return [x / f for x in vals]
        raise ValueError("negative step in a dense division")
    n = len(vals)
    if d >= n or c == 0:
        return vals
    out = list(vals)
    if c == -1:
        for r in range(d):
            out[r::d] = accumulate(out[r::d])
    elif c == 1:
        for r in range(d):
            sl = out[r::d]
            alt = [x if k % 2 == 0 else -x for k, x in enumerate(sl)]
            acc = list(accumulate(alt))
            out[r::d] = [x if k % 2 == 0 else -x for k, x in enumerate(acc)]
    else:
        for i in range(d, n):
            out[i] -= c * out[i - d]
    return out


def add_into(a_start: int, a: list, b_start: int, b: list) -> tuple[int, list]:
    """Sum of two windows sharing the same top."""
    if not a:
        return b_start, b
    if not b:
        return a_start, a
    if a_start > b_start:
        a_start, a, b_start, b = b_start, b, a_start, a
    off = b_start - a_start
    if off == 0:
        return a_start, [x + y for x, y in zip(a, b)]
    return a_start, a[:off] + [x + y for x, y in zip(a[off:], b)]


def shift(start: int, vals: list, delta: int, top: int) -> tuple[int, list]:
    """Multiply by ``q^(delta/D)`` and cut the window at ``top``."""
    start += delta
    keep = top - start
    if keep <= 0:
        return top, []
    if keep < len(vals):
        vals = vals[:keep]
    return start, vals


def scale(vals: list, c) -> list:
    if c == 1:
        return vals
    if c == -1:
        return [-x for x in vals]
    return [c * x for x in vals]
