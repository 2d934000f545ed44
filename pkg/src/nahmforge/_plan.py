"""Accuracy planning for products of truncated series.

A product ``f_1 ... f_m`` is known below ``N`` as soon as every ``f_i`` is known
below ``N - sum_{j != i} v_j`` where ``v_j`` bounds the valuation of ``f_j`` from
below.  Valuations are found by probing: the series is evaluated at a small
accuracy, doubled until a nonzero term shows up.  When none shows up below
:data:`PROBE_LIMIT` the probe accuracy itself is a valid lower bound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .series import INF, QSeries, as_accuracy

Maker = Callable[[Fraction], QSeries]

PROBE_LIMIT = 64


def probe_valuation(make: Maker, start=1) -> Fraction | float:
    """Valuation of the series produced by ``make`` (INF for an exact zero).

    The value is exact when a term appears below :data:`PROBE_LIMIT` and a
    lower bound otherwise.
    """
    acc = Fraction(start)
    while True:
        s = make(acc)
        if not s.is_zero():
            return s.valuation
        if s.accuracy == INF:
            return INF
        if acc >= PROBE_LIMIT:
            return acc
        acc = 2 * acc if acc > 0 else Fraction(1)


def product_to(accuracy, makers: Sequence[Maker], valuations: Sequence | None = None) -> QSeries:
    """``prod make_i()`` accurate below ``accuracy``."""
    N = as_accuracy(accuracy)
    if valuations is None:
        valuations = [probe_valuation(m) for m in makers]
    if any(v == INF for v in valuations):
        return QSeries.zero(INF)
    total = sum(valuations)
    if N <= total:
        return QSeries.zero(N)
    out = QSeries.constant(1)
    for make, v in zip(makers, valuations):
        out = out * make(N - (total - v))
    return out.truncate(N)
