"""Closed disks ``D(c, p**s)`` in Q_p and ultrametric interval arithmetic.

Balls are stored in a canonical form: the center is an exact rational reduced
modulo ``p**ceil(-s)``, so two balls are equal exactly when their fields are.
A truncated center is widened to its own precision first.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import Undecidable
from .scalar import INF, AtLeast, PadicScalar, rational_val, scalar

NEG_INF = -math.inf


def _canonical_center(p, q, radius_exp):
    if radius_exp == NEG_INF:
        return q
    digits = math.ceil(-radius_exp)
    v = rational_val(q, p)
    if v >= digits:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    if v >= 0:
        num //= p**v
    else:
        den //= p ** (-v)
    mod = p ** (digits - v)
    unit = num * pow(den, -1, mod) % mod
    return Fraction(p) ** v * unit


class PadicBall:
    """The disk ``{z : |z - center| <= p**radius_exp}``; ``radius_exp = -inf`` is a point."""

    __slots__ = ("p", "_center", "radius_exp")

    def __init__(self, center, radius_exp, p=None):
        if not isinstance(center, PadicScalar):
            if p is None:
                raise TypeError("prime required for a non-PadicScalar center")
            center = PadicScalar(p, center)
        p = center.p
        if radius_exp != NEG_INF:
            radius_exp = Fraction(radius_exp)
        if not center.is_exact:
            radius_exp = max(radius_exp, Fraction(-center.abs_prec))
        q = center.to_fraction()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "_center", _canonical_center(p, q, radius_exp))
        object.__setattr__(self, "radius_exp", radius_exp)

    def __setattr__(self, name, value):
        raise AttributeError("PadicBall is immutable")

    @classmethod
    def point(cls, x):
        return cls(x, NEG_INF)

    @property
    def center(self):
        return PadicScalar(self.p, self._center)

    @property
    def center_q(self):
        return self._center

    @property
    def is_point(self):
        return self.radius_exp == NEG_INF

    def center_val(self):
        return rational_val(self._center, self.p)

    def min_val(self):
        """Smallest valuation of any member (a lower bound for every member)."""
        return min(self.center_val(), -self.radius_exp)

    def exact_val(self):
        """The common valuation of all members, or None if members differ."""
        v = self.center_val()
        if v < -self.radius_exp:
            return v
        if self.is_point:
            return v
        return None

    def contains_zero(self):
        return self.center_val() >= -self.radius_exp

    def children(self):
        """Split a Q_p disk with integer radius exponent into its p maximal subdisks."""
        if self.is_point or self.radius_exp.denominator != 1:
            raise ValueError("only disks with integer radius exponent can be split")
        n = -int(self.radius_exp)
        step = Fraction(self.p) ** n
        return [PadicBall(PadicScalar(self.p, self._center + j * step), self.radius_exp - 1) for j in range(self.p)]

    def _key(self):
        return (self.p, self._center, self.radius_exp)

    def __eq__(self, other):
        if not isinstance(other, PadicBall):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        c = self._center
        cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        if self.is_point:
            return f"{{{cs}}}"
        s = self.radius_exp
        ss = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
        return f"D({cs}, {self.p}^{ss})"

    def __repr__(self):
        return f"PadicBall({self})"

    def __add__(self, other):
        return ball_arith(self, as_ball(self.p, other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return ball_arith(self, as_ball(self.p, other), "sub")

    def __rsub__(self, other):
        return ball_arith(as_ball(self.p, other), self, "sub")

    def __mul__(self, other):
        return ball_arith(self, as_ball(self.p, other), "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return PadicBall(PadicScalar(self.p, -self._center), self.radius_exp)

    def __pow__(self, e):
        result = as_ball(self.p, 1)
        for _ in range(e):
            result = result * self
        return result


def as_ball(p, x):
    if isinstance(x, PadicBall):
        return x
    x = scalar(p, x)
    if x.is_exact:
        return PadicBall.point(x)
    return PadicBall(x, Fraction(-x.abs_prec))


def ball_arith(a, b, op):
    """Enclosure of ``{x op y : x in a, y in b}`` for ``op`` in add, sub, mul."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    p = a.p
    sa, sb = a.radius_exp, b.radius_exp
    if op in ("add", "sub"):
        c = a.center_q + b.center_q if op == "add" else a.center_q - b.center_q
        return PadicBall(PadicScalar(p, c), max(sa, sb))
    if op == "mul":
        va, vb = a.center_val(), b.center_val()
        s = max(-va + sb, -vb + sa, sa + sb)
        if s != NEG_INF and not isinstance(s, Fraction):
            s = Fraction(s)
        return PadicBall(PadicScalar(p, a.center_q * b.center_q), s)
    raise ValueError(f"unknown ball op {op!r}")


def ball_contains(ball, x):
    """Decide ``x in ball``; raises :class:`Undecidable` when precision is too low."""
    x = scalar(ball.p, x)
    diff = x - ball.center
    v = diff.val()
    if isinstance(v, AtLeast):
        if ball.is_point:
            raise Undecidable("cannot prove equality with a point at finite precision")
        if v >= -ball.radius_exp:
            return True
        raise Undecidable(f"{x} is only known to O({ball.p}^{int(v)})")
    if ball.is_point:
        return v == INF
    return v >= -ball.radius_exp


def ball_subset(a, b):
    """Decide ``a`` is a subset of ``b``."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    if a.radius_exp > b.radius_exp:
        return False
    return ball_contains(b, a.center)
