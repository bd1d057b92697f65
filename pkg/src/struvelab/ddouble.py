"""Double-double arithmetic built from error-free transformations.

A double-double number is an unevaluated pair ``(hi, lo)`` with
``|lo| <= ulp(hi)/2``.  Every routine accepts Python floats or numpy arrays and
broadcasts elementwise, so whole series can be advanced in lock-step over a grid
of arguments.  ``math.fma`` is not assumed; products use Dekker splitting.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1

# unit roundoff of the pair format
DD_EPS = 2.0 ** -104


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    """Requires |a| >= |b|."""
    s = a + b
    err = b - (s - a)
    return s, err


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_add_d(ah, al, b):
    s, e = two_sum(ah, b)
    e = e + al
    return quick_two_sum(s, e)


def dd_neg(ah, al):
    return -ah, -al


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add_d(q1, q2, q3)


def dd_inv(bh, bl):
    return dd_div(1.0, 0.0, bh, bl)


def dd_from_decimal(d: decimal.Decimal) -> tuple[float, float]:
    hi = float(d)
    lo = float(d - decimal.Decimal(hi))
    return hi, lo


def dd_sum(values) -> tuple[float, float]:
    """Compensated sum of a 1-D sequence of doubles, returned as a pair."""
    hi, lo = 0.0, 0.0
    for v in np.asarray(values, dtype=float).ravel():
        hi, lo = dd_add_d(hi, lo, float(v))
    return hi, lo


@dataclass(frozen=True)
class DD:
    """Scalar double-double value with the usual operators."""

    hi: float
    lo: float = 0.0

    @staticmethod
    def of(x) -> "DD":
        if isinstance(x, DD):
            return x
        if isinstance(x, decimal.Decimal):
            return DD(*dd_from_decimal(x))
        return DD(float(x), 0.0)

    def __add__(self, other):
        o = DD.of(other)
        return DD(*dd_add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-DD.of(other))

    def __rsub__(self, other):
        return DD.of(other) + (-self)

    def __mul__(self, other):
        o = DD.of(other)
        return DD(*dd_mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DD.of(other)
        return DD(*dd_div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other):
        return DD.of(other) / self

    def __float__(self):
        return self.hi + self.lo

    def to_decimal(self) -> decimal.Decimal:
        return decimal.Decimal(self.hi) + decimal.Decimal(self.lo)
