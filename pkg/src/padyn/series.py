"""Ultrametric Taylor models over a parameter disk.

A parameter ``t`` ranging over the Q_p disk ``D(t0, p**-n)`` is written
``t = t0 + p**n * u`` with ``|u| <= 1``. A :class:`ParamSeries` is a
polynomial in ``u`` plus an error term,

    X(u) = sum_j coeffs[j] * p**-scale * u**j  +  E(u),   v(E(u)) >= prec,

so the bound on ``|X(u)|`` over the unit disk is the largest coefficient
(the Gauss norm) or the error, whichever dominates. Keeping the dependence on
``u`` explicit avoids the blow-up that plain ball arithmetic suffers when the
same parameter appears in several places.

Coefficients are plain integers reduced modulo ``p**(prec + scale)``; the
hot loops live in :mod:`padyn.kernels`.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .ball import NEG_INF, PadicBall
from .kernels import INF_VAL, ival, min_val, series_mul
from .scalar import DEFAULT_PRECISION, INF, PadicScalar, rational_val

DEFAULT_DEGREE = 16


def _scaled_digits(q, p, scale, modulus):
    """Integer congruent to ``q * p**scale`` modulo ``modulus`` (requires it p-integral)."""
    q = q * Fraction(p) ** scale
    if modulus is None:
        if q.denominator != 1:
            raise ValueError("unbounded exact series value must be integral after scaling")
        return q.numerator
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


class ParamSeries:
    __slots__ = ("p", "scale", "coeffs", "prec", "degree", "rel_prec")

    def __init__(self, p, scale, coeffs, prec, degree=DEFAULT_DEGREE, rel_prec=DEFAULT_PRECISION):
        self.p = p
        self.scale = scale
        self.coeffs = coeffs
        self.prec = prec
        self.degree = degree
        self.rel_prec = rel_prec

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, p, q, prec=INF, degree=DEFAULT_DEGREE, rel_prec=DEFAULT_PRECISION):
        """The constant ``q`` known up to an error of valuation ``>= prec``."""
        q = Fraction(q)
        if q == 0:
            return cls(p, 0, [0], prec, degree, rel_prec)._normalize()
        v = rational_val(q, p)
        if prec == INF:
            prec = v + rel_prec
        scale = max(0, -v)
        if prec + scale <= 0:
            return cls(p, 0, [0], prec, degree, rel_prec)
        x = _scaled_digits(q, p, scale, p ** (prec + scale))
        return cls(p, scale, [x], prec, degree, rel_prec)._normalize()

    @classmethod
    def from_ball(cls, ball, degree=DEFAULT_DEGREE, rel_prec=DEFAULT_PRECISION):
        """A ball as a parameter-independent series."""
        if ball.is_point:
            return cls.constant(ball.p, ball.center_q, degree=degree, rel_prec=rel_prec)
        prec = math.floor(-ball.radius_exp)
        return cls.constant(ball.p, ball.center_q, prec, degree, rel_prec)

    @classmethod
    def parameter(cls, ball, degree=DEFAULT_DEGREE, rel_prec=DEFAULT_PRECISION):
        """The identity ``t = t0 + p**n u`` on the disk ``D(t0, p**-n)``."""
        p = ball.p
        s = ball.radius_exp
        if s == NEG_INF or Fraction(s).denominator != 1:
            raise ValueError("parameter disks need an integer radius exponent")
        n = -int(s)
        t0 = cls.constant(p, ball.center_q, degree=degree, rel_prec=rel_prec)
        if n >= 0:
            step = cls(p, 0, [0, p**n], INF, degree, rel_prec)
        else:
            step = cls(p, -n, [0, 1], INF, degree, rel_prec)
        return t0 + step

    def _like(self, scale, coeffs, prec):
        return ParamSeries(self.p, scale, coeffs, prec, self.degree, self.rel_prec)

    def lift(self, other):
        """Coerce a number, ball or series to a series compatible with ``self``."""
        if isinstance(other, ParamSeries):
            return other
        if isinstance(other, PadicBall):
            return ParamSeries.from_ball(other, self.degree, self.rel_prec)
        if isinstance(other, PadicScalar):
            if other.is_exact:
                return ParamSeries.constant(self.p, other.to_fraction(), degree=self.degree, rel_prec=self.rel_prec)
            return ParamSeries.from_ball(PadicBall(other, Fraction(-other.abs_prec)), self.degree, self.rel_prec)
        return ParamSeries.constant(self.p, Fraction(other), degree=self.degree, rel_prec=self.rel_prec)

    # -- normalisation ------------------------------------------------------

    def _gauss_raw(self):
        """Smallest valuation among the stored coefficients (ignoring the error)."""
        m = min_val(self.coeffs, self.p)
        return INF if m == INF_VAL else m - self.scale

    def _normalize(self):
        p = self.p
        coeffs = self.coeffs
        prec = self.prec
        scale = self.scale
        g = self._gauss_raw()
        if g != INF:
            prec = min(prec, g + self.rel_prec)
        if prec != INF:
            if prec + scale <= 0:
                return self._like(0, [0], prec)
            mod = p ** (prec + scale)
            coeffs = [c % mod for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        m = min_val(coeffs, p)
        if m == INF_VAL:
            return self._like(0, [0], prec)
        if m > 0:
            f = p**m
            coeffs = [c // f for c in coeffs]
            scale -= m
        return self._like(scale, coeffs, prec)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self.lift(other)
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self.lift(other)
        return self._add(other, -1)

    def __rsub__(self, other):
        return self.lift(other)._add(self, -1)

    def __neg__(self):
        return self._like(self.scale, [-c for c in self.coeffs], self.prec)._normalize()

    def _add(self, other, sign):
        p = self.p
        scale = max(self.scale, other.scale)
        a = self.coeffs
        b = other.coeffs
        if self.scale < scale:
            f = p ** (scale - self.scale)
            a = [c * f for c in a]
        if other.scale < scale:
            f = p ** (scale - other.scale)
            b = [c * f for c in b]
        n = max(len(a), len(b))
        out = [
            (a[i] if i < len(a) else 0) + sign * (b[i] if i < len(b) else 0)
            for i in range(n)
        ]
        return self._like(scale, out, min(self.prec, other.prec))._normalize()

    def gauss_val(self):
        """Lower bound for ``v(X(u))`` over the whole unit disk."""
        return min(self._gauss_raw(), self.prec)

    def __mul__(self, other):
        other = self.lift(other)
        p = self.p
        scale = self.scale + other.scale
        prec = min(self.prec + other.gauss_val(), other.prec + self.gauss_val())
        if prec != INF and prec + scale <= 0:
            return self._like(0, [0], prec)
        mod = None if prec == INF else p ** (prec + scale)
        if mod is None:
            out, tail = _exact_conv(self.coeffs, other.coeffs, self.degree, p)
        else:
            out, tail = series_mul(self.coeffs, other.coeffs, self.degree, p, mod)
        if tail != INF_VAL:
            prec = min(prec, tail - scale)
        return self._like(scale, out, prec)._normalize()

    __rmul__ = __mul__

    def __pow__(self, e):
        result = self.lift(1)
        for _ in range(e):
            result = result * self
        return result

    # -- queries ------------------------------------------------------------

    def coefficient(self, j):
        """Exact rational value of the stored ``u**j`` coefficient."""
        if j >= len(self.coeffs):
            return Fraction(0)
        return Fraction(self.coeffs[j]) * Fraction(self.p) ** (-self.scale)

    def const_val(self):
        """The valuation shared by every value of the series, or None if values differ."""
        c0 = self.coeffs[0]
        if c0 == 0:
            return None
        v0 = ival(c0, self.p) - self.scale
        rest = min_val(self.coeffs[1:], self.p) if len(self.coeffs) > 1 else INF_VAL
        rest = INF if rest == INF_VAL else rest - self.scale
        if v0 < rest and v0 < self.prec:
            return v0
        return None

    def enclosure(self):
        """Smallest ball (in this representation) containing every value."""
        rest = min_val(self.coeffs[1:], self.p) if len(self.coeffs) > 1 else INF_VAL
        rest = INF if rest == INF_VAL else rest - self.scale
        v = min(rest, self.prec)
        radius = NEG_INF if v == INF else Fraction(-v)
        return PadicBall(PadicScalar(self.p, self.coefficient(0)), radius)

    def at(self, u):
        """Ball of possible values at the parameter point ``u`` (``|u| <= 1``)."""
        u = Fraction(u)
        total = Fraction(0)
        for j in reversed(range(len(self.coeffs))):
            total = total * u + self.coefficient(j)
        radius = NEG_INF if self.prec == INF else Fraction(-self.prec)
        return PadicBall(PadicScalar(self.p, total), radius)

    def __repr__(self):
        return f"ParamSeries(p={self.p}, scale={self.scale}, coeffs={self.coeffs}, prec={self.prec})"


def _exact_conv(xs, ys, cap, p):
    out = [0] * (len(xs) + len(ys) - 1)
    for i, a in enumerate(xs):
        if a:
            for j, b in enumerate(ys):
                out[i + j] += a * b
    tail = INF_VAL
    for c in out[cap + 1:]:
        if c:
            tail = min(tail, ival(c, p))
    return out[: cap + 1], tail
