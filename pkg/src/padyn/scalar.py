"""Elements of Q_p, either exact rationals or truncated p-adic expansions.

A :class:`PadicScalar` is in one of three states:

* exact: a reduced :class:`fractions.Fraction`;
* truncated: ``p**v * u`` with ``u`` a unit known modulo ``p**n``;
* inexact zero: a value only known to satisfy ``v(x) >= k``.

Any operation with a truncated operand gives a truncated result. Values are
immutable and hashable.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import AmbiguousValuation, DivisionByZero, ParseError, PrecisionExhausted
from .kernels import ival

DEFAULT_PRECISION = 128

INF = math.inf


class AtLeast(int):
    """A valuation that is only a lower bound (from an inexact zero)."""

    def __repr__(self):
        return f"AtLeast({int(self)})"

    def __str__(self):
        return f">={int(self)}"


def rational_val(q, p):
    """Valuation of a rational number; ``inf`` for zero."""
    q = Fraction(q)
    if q == 0:
        return INF
    return ival(q.numerator, p) - ival(q.denominator, p)


def _unit_digits(q, p, v, digits):
    """Return the unit part of ``q = p**v * unit`` reduced mod ``p**digits``."""
    num, den = q.numerator, q.denominator
    if v >= 0:
        num //= p**v
    else:
        den //= p ** (-v)
    mod = p**digits
    return num * pow(den, -1, mod) % mod


class PadicScalar:
    __slots__ = ("p", "_q", "_v", "_u", "_n")

    def __init__(self, p, value=0):
        if isinstance(value, PadicScalar):
            if value.p != p:
                raise ValueError("prime mismatch")
            self._set(p, value._q, value._v, value._u, value._n)
            return
        if isinstance(value, str):
            other = PadicScalar.parse(value, p)
            self._set(p, other._q, other._v, other._u, other._n)
            return
        self._set(p, Fraction(value), None, None, None)

    def _set(self, p, q, v, u, n):
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_u", u)
        object.__setattr__(self, "_n", n)

    def __setattr__(self, name, value):
        raise AttributeError("PadicScalar is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, p, q, v, u, n):
        obj = object.__new__(cls)
        obj._set(p, q, v, u, n)
        return obj

    @classmethod
    def truncated(cls, p, v, u, n):
        """``p**v * u + O(p**(v+n))``; ``u`` is normalised to a unit."""
        if n < 1:
            raise PrecisionExhausted("relative precision must be at least 1")
        u %= p**n
        if u == 0:
            return cls.zero_to(p, v + n)
        w = ival(u, p)
        if w:
            return cls.truncated(p, v + w, u // p**w, n - w) if n - w >= 1 else cls.zero_to(p, v + n)
        return cls._raw(p, None, v, u, n)

    @classmethod
    def zero_to(cls, p, k):
        """A zero known only modulo ``p**k``."""
        return cls._raw(p, None, k, 0, 0)

    @classmethod
    def from_rational(cls, p, q, rel_prec=DEFAULT_PRECISION):
        """Truncate an exact rational to ``rel_prec`` significant digits."""
        q = Fraction(q)
        if q == 0:
            return cls(p, 0)
        v = rational_val(q, p)
        return cls._raw(p, None, v, _unit_digits(q, p, v, rel_prec), rel_prec)

    @classmethod
    def with_abs_prec(cls, p, q, abs_prec):
        """Truncate an exact rational to absolute precision ``abs_prec``."""
        q = Fraction(q)
        v = rational_val(q, p)
        if v >= abs_prec:
            return cls.zero_to(p, abs_prec)
        return cls._raw(p, None, v, _unit_digits(q, p, v, abs_prec - v), abs_prec - v)

    # -- inspection ---------------------------------------------------------

    @property
    def is_exact(self):
        return self._q is not None

    @property
    def is_zero(self):
        """True only for an exact zero."""
        return self._q is not None and self._q == 0

    @property
    def is_inexact_zero(self):
        return self._q is None and self._u == 0

    def val(self):
        """Valuation: an int, ``inf`` for exact zero, or :class:`AtLeast` for an inexact zero."""
        if self._q is not None:
            return rational_val(self._q, self.p)
        if self._u == 0:
            return AtLeast(self._v)
        return self._v

    def certain_val(self):
        """Valuation, raising :class:`AmbiguousValuation` for inexact zeros."""
        v = self.val()
        if isinstance(v, AtLeast):
            raise AmbiguousValuation(f"value is only known to be O({self.p}^{int(v)})")
        return v

    def norm(self):
        """The p-adic absolute value as an exact Fraction (0 for exact zero)."""
        v = self.certain_val()
        if v == INF:
            return Fraction(0)
        return Fraction(self.p) ** (-v)

    @property
    def abs_prec(self):
        if self._q is not None:
            return INF
        return self._v + self._n

    @property
    def rel_prec(self):
        if self._q is not None:
            return INF
        return self._n

    @property
    def unit(self):
        if self._q is not None:
            raise ValueError("exact scalars have no stored unit")
        return self._u

    def to_fraction(self):
        """The exact value, or the canonical rational representative ``p**v * u``."""
        if self._q is not None:
            return self._q
        if self._u == 0:
            return Fraction(0)
        return Fraction(self.p) ** self._v * self._u

    def truncate(self, rel_prec=DEFAULT_PRECISION):
        """Drop to a truncated value with at most ``rel_prec`` significant digits."""
        if self._q is not None:
            return PadicScalar.from_rational(self.p, self._q, rel_prec) if self._q else self
        if self._u == 0 or self._n <= rel_prec:
            return self
        return PadicScalar._raw(self.p, None, self._v, self._u % self.p**rel_prec, rel_prec)

    def reduce_abs(self, abs_prec):
        """Lower the absolute precision to at most ``abs_prec``."""
        if abs_prec >= self.abs_prec:
            return self
        return PadicScalar.with_abs_prec(self.p, self.to_fraction(), abs_prec)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar(self.p, other)
        return NotImplemented

    def _digits(self, abs_prec):
        """``(v, U)`` with ``self == p**v * U (mod p**abs_prec)``, or None if that is 0."""
        p = self.p
        if self._q is not None:
            v = rational_val(self._q, p)
            if v >= abs_prec:
                return None
            return v, _unit_digits(self._q, p, v, abs_prec - v)
        if self._u == 0 or self._v >= abs_prec:
            return None
        return self._v, self._u % p ** (abs_prec - self._v)

    def _add(self, other, sign):
        p = self.p
        if self._q is not None and other._q is not None:
            return PadicScalar._raw(p, self._q + sign * other._q, None, None, None)
        prec = min(self.abs_prec, other.abs_prec)
        parts = []
        for s, x in ((1, self), (sign, other)):
            d = x._digits(prec)
            if d is not None:
                parts.append((d[0], s * d[1]))
        if not parts:
            return PadicScalar.zero_to(p, prec)
        m = min(v for v, _ in parts)
        total = sum(digits * p ** (v - m) for v, digits in parts)
        mod = p ** (prec - m)
        total %= mod
        if total == 0:
            return PadicScalar.zero_to(p, prec)
        w = ival(total, p)
        return PadicScalar._raw(p, None, m + w, total // p**w, prec - m - w)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self, -1)

    def __neg__(self):
        if self._q is not None:
            return PadicScalar._raw(self.p, -self._q, None, None, None)
        if self._u == 0:
            return self
        return PadicScalar._raw(self.p, None, self._v, (-self._u) % self.p**self._n, self._n)

    def __pos__(self):
        return self

    def _split(self, rel_prec):
        """``(v, unit mod p**rel_prec)`` for a nonzero value with certain valuation."""
        if self._q is not None:
            v = rational_val(self._q, self.p)
            return v, _unit_digits(self._q, self.p, v, rel_prec)
        return self._v, self._u % self.p**rel_prec

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if self._q is not None and other._q is not None:
            return PadicScalar._raw(p, self._q * other._q, None, None, None)
        if self.is_zero or other.is_zero:
            return PadicScalar(p, 0)
        if self.is_inexact_zero or other.is_inexact_zero:
            a, b = (self, other) if self.is_inexact_zero else (other, self)
            if b.is_inexact_zero:
                return PadicScalar.zero_to(p, a._v + b._v)
            return PadicScalar.zero_to(p, a._v + b.certain_val())
        n = min(self.rel_prec, other.rel_prec)
        v1, u1 = self._split(n)
        v2, u2 = other._split(n)
        return PadicScalar._raw(p, None, v1 + v2, u1 * u2 % p**n, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._div(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._div(self)

    def _div(self, other):
        p = self.p
        if other.is_zero:
            raise DivisionByZero("division by exact zero")
        if other.is_inexact_zero:
            raise PrecisionExhausted("division by a value known only to be O(p^k)")
        if self._q is not None and other._q is not None:
            return PadicScalar._raw(p, self._q / other._q, None, None, None)
        if self.is_zero:
            return self
        if self.is_inexact_zero:
            return PadicScalar.zero_to(p, self._v - other.certain_val())
        n = min(self.rel_prec, other.rel_prec)
        v1, u1 = self._split(n)
        v2, u2 = other._split(n)
        mod = p**n
        return PadicScalar._raw(p, None, v1 - v2, u1 * pow(u2, -1, mod) % mod, n)

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return PadicScalar(self.p, 1) / self ** (-e)
        if self._q is not None:
            return PadicScalar._raw(self.p, self._q**e, None, None, None)
        result = PadicScalar(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison / hashing ----------------------------------------------

    def _key(self):
        if self._q is not None:
            return (self.p, "q", self._q)
        return (self.p, "t", self._v, self._u, self._n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._q is not None and self._q == other
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def agrees_with(self, other):
        """Valuation of ``self - other`` as far as it is known (``inf`` if both exact and equal)."""
        return (self - other).val()

    # -- text ---------------------------------------------------------------

    def __str__(self):
        if self._q is not None:
            q = self._q
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        p = self.p
        if self._u == 0:
            return f"O({p}^{self._v})"
        return f"{p}^{self._v} * {self._u} + O({p}^{self._v + self._n})"

    def __repr__(self):
        return f"PadicScalar({self.p}, {str(self)!r})"

    _TRUNC_RE = re.compile(
        r"^\s*(?:(?P<head>.*?)\s*\+\s*)?O\(\s*(?P<p>\d+)\s*\^\s*\{?\s*(?P<k>-?\d+)\s*\}?\s*\)\s*$"
    )
    _POW_RE = re.compile(r"^\s*(?P<p>\d+)\s*\^\s*\{?\s*(?P<v>-?\d+)\s*\}?\s*\*\s*(?P<u>-?\d+)\s*$")

    @classmethod
    def parse(cls, text, p):
        """Inverse of ``str``. Also accepts ``"<rational> + O(p^n)"``."""
        m = cls._TRUNC_RE.match(text)
        if m is None:
            return cls._raw(p, _parse_rational(text), None, None, None)
        if int(m.group("p")) != p:
            raise ParseError(f"literal {text!r} uses prime {m.group('p')}, expected {p}")
        k = int(m.group("k"))
        head = m.group("head")
        if head is None:
            return cls.zero_to(p, k)
        pm = cls._POW_RE.match(head)
        if pm is not None:
            if int(pm.group("p")) != p:
                raise ParseError(f"literal {text!r} mixes primes")
            v, u = int(pm.group("v")), int(pm.group("u"))
            if k <= v:
                raise ParseError(f"precision O({p}^{k}) is not above valuation {v}")
            return cls.truncated(p, v, u, k - v)
        return cls.with_abs_prec(p, _parse_rational(head), k)


def _parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse scalar literal {text!r}") from exc


def scalar(p, x):
    """Coerce ``x`` (int, Fraction, str or PadicScalar) to a PadicScalar over ``p``."""
    if isinstance(x, PadicScalar):
        if x.p != p:
            raise ValueError(f"prime mismatch: {x.p} vs {p}")
        return x
    return PadicScalar(p, x)


def val(x):
    return x.val()


def arith(x, y, op):
    """Dispatch ``add|sub|mul|div`` on two scalars."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")
