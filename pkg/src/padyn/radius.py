"""Known values and bounds for the critical radius ``r(d, p)``.

``r(d, p)`` is the supremum of ``max_i -v(c_i)`` over post-critically
bounded normal-form maps of degree ``d`` with critical points ``c_i``. Exact
values are known in a handful of regimes; elsewhere only a lower bound is
available, realised by an explicit post-critically finite witness

    f(z) = z**b * (z - alpha)**(a p**k),   alpha**(d-1) = c,

whose identities are checked in the ring ``Q[alpha] / (alpha**(d-1) - c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError
from .scalar import rational_val


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _power_exponent(d, p):
    """``k`` with ``d == p**k``, or None."""
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k if d == 1 else None


# -- decomposition and lower bound ------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``d = a * p**k + b`` with ``p**k < d`` maximal and ``p**l`` exactly dividing ``d``."""

    k: int
    l: int
    a: int
    b: int


def decompose(d, p):
    """Split ``d`` as ``a * p**k + b`` with ``1 <= a < p`` and ``1 <= b <= p**k``.

    When ``p**k`` divides ``d`` the remainder would be 0; the split
    ``(a - 1) * p**k + p**k`` is used instead, so ``b = p**k``.
    """
    if p < 2 or d < 2:
        raise DomainError("need d >= 2 and p >= 2")
    if p >= d:
        raise DomainError(f"decomposition needs p < d (got d={d}, p={p})")
    if _power_exponent(d, p) is not None:
        raise DomainError(f"d={d} is a power of p={p}")
    k = 0
    while p ** (k + 1) < d:
        k += 1
    pk = p**k
    a, b = divmod(d, pk)
    if b == 0:
        a, b = a - 1, pk
    l = rational_val(Fraction(d), p)
    return Decomposition(k, l, a, b)


def lower_bound(d, p):
    """``a (k - l) p**k / (d - 1)``."""
    dec = decompose(d, p)
    return Fraction(dec.a * (dec.k - dec.l) * p**dec.k, d - 1)


# -- known values ---------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusAnswer:
    d: int
    p: int
    kind: str  # "Exact" | "Claimed" | "Bounds"
    value: Fraction  # the exact or claimed value, or the lower bound
    source: str
    note: str = ""

    @property
    def lower(self):
        return self.value

    @property
    def upper(self):
        return None if self.kind == "Bounds" else self.value

    def label(self):
        return _LABELS.get(self.source, self.source)

    def __str__(self):
        v = _frac(self.value)
        if self.kind == "Bounds":
            return f"Bounds({v}, unknown) ({self.label()})"
        return f"{self.kind} {v} ({self.label()})"

    def to_dict(self):
        out = {"d": self.d, "p": self.p, "kind": self.kind, "source": self.source}
        if self.kind == "Bounds":
            out["lower"] = _frac(self.value)
            out["upper"] = "unknown"
        else:
            out["value"] = _frac(self.value)
        if self.note:
            out["note"] = self.note
        return out


_LABELS = {
    "p>d": "Theorem p>d",
    "d=p^k": "Theorem d=p^k",
    "d=2p": "d=2p",
    "d/2<p<d": "Theorem d/2<p<d",
    "d=3p": "d=3p",
    "lower-bound": "witness lower bound",
}


def _frac(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def known_radius(d, p):
    """What is known about ``r(d, p)``, tagged with the regime it comes from."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if d < 2:
        raise DomainError("degree must be at least 2")
    if p > d:
        return RadiusAnswer(d, p, "Exact", Fraction(0), "p>d")
    if _power_exponent(d, p) is not None:
        return RadiusAnswer(d, p, "Exact", Fraction(0), "d=p^k")
    if d == 2 * p:
        return RadiusAnswer(d, p, "Exact", Fraction(0), "d=2p")
    if 2 * p > d:
        return RadiusAnswer(d, p, "Exact", Fraction(p, d - 1), "d/2<p<d")
    if d == 3 * p:
        return RadiusAnswer(d, p, "Claimed", Fraction(0), "d=3p", "stated without proof in the source")
    return RadiusAnswer(d, p, "Bounds", lower_bound(d, p), "lower-bound")


def radius_table(dmax, pmax, dmin=2):
    """Known answers for ``dmin <= d <= dmax`` and primes ``p <= pmax``."""
    primes = [q for q in range(2, pmax + 1) if is_prime(q)]
    return [known_radius(d, p) for d in range(dmin, dmax + 1) for p in primes]


# -- the quotient ring Q[alpha]/(alpha**n - c) ------------------------------------


_ZERO = Fraction(0)


class QuotientRingElement:
    """``sum coeffs[j] * alpha**j`` modulo ``alpha**n = c``, ``n = len(coeffs)``."""

    __slots__ = ("c", "coeffs")

    def __init__(self, c, coeffs):
        self.c = Fraction(c)
        self.coeffs = tuple(Fraction(x) for x in coeffs)

    @classmethod
    def _raw(cls, c, coeffs):
        # coeffs already a list of Fractions
        out = object.__new__(cls)
        out.c = c
        out.coeffs = tuple(coeffs)
        return out

    @classmethod
    def scalar(cls, c, n, x):
        return cls._raw(Fraction(c), [Fraction(x)] + [_ZERO] * (n - 1))

    @classmethod
    def alpha(cls, c, n):
        c = Fraction(c)
        if n == 1:
            return cls._raw(c, [c])
        return cls._raw(c, [_ZERO, Fraction(1)] + [_ZERO] * (n - 2))

    @property
    def n(self):
        return len(self.coeffs)

    def _lift(self, other):
        if isinstance(other, QuotientRingElement):
            if other.c != self.c or other.n != self.n:
                raise ValueError("elements of different rings")
            return other
        return QuotientRingElement.scalar(self.c, self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        return QuotientRingElement._raw(self.c, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return QuotientRingElement._raw(self.c, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, QuotientRingElement):
            k = Fraction(other)
            return QuotientRingElement._raw(self.c, [x * k if x else x for x in self.coeffs])
        other = self._lift(other)
        n = self.n
        out = [_ZERO] * n
        ys = [(j, y) for j, y in enumerate(other.coeffs) if y]
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j, y in ys:
                e = i + j
                if e >= n:
                    out[e - n] += self.c * x * y
                else:
                    out[e] += x * y
        return QuotientRingElement._raw(self.c, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = QuotientRingElement.scalar(self.c, self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, QuotientRingElement):
            return NotImplemented
        return self.c == other.c and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.c, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        terms = [f"{_frac(x)}*alpha^{j}" for j, x in enumerate(self.coeffs) if x]
        return " + ".join(terms) if terms else "0"


# polynomials in z with ring coefficients, stored low degree first


def _binomial_power(root, e, one):
    """Coefficients of ``(z - root)**e`` from the binomial theorem."""
    out = [None] * (e + 1)
    power = one
    for j in range(e + 1):
        # coefficient of z**(e - j) is C(e, j) (-root)**j
        out[e - j] = power * comb(e, j)
        power = power * (-root)
    return out


def _times_linear(f, root):
    """``f(z) * (z - root)``."""
    zero = f[0] * 0
    out = [zero] * (len(f) + 1)
    for i, x in enumerate(f):
        out[i + 1] = out[i + 1] + x
        out[i] = out[i] - x * root
    return out


def _poly_eval(f, z):
    """``sum f[i] z**i``; terms are accumulated sparsely since most are monomials."""
    first = f[0]
    acc = [_ZERO] * first.n
    zpow = QuotientRingElement.scalar(first.c, first.n, 1)
    for x in f:
        if not x.is_zero():
            for j, y in enumerate((x * zpow).coeffs):
                if y:
                    acc[j] += y
        zpow = zpow * z
    return QuotientRingElement._raw(first.c, acc)


# -- the post-critically finite witness --------------------------------------------


@dataclass(frozen=True)
class PCFWitness:
    d: int
    p: int
    decomposition: Decomposition
    b: int
    exponent: int  # a * p**k
    c: Fraction  # alpha**(d-1)
    v_alpha: Fraction

    @property
    def shape(self):
        zb = "z" if self.b == 1 else f"z^{self.b}"
        return f"{zb}(z - alpha)^{self.exponent}"

    def to_dict(self):
        dec = self.decomposition
        return {
            "d": self.d, "p": self.p,
            "decomposition": {"k": dec.k, "l": dec.l, "a": dec.a, "b": dec.b},
            "shape": self.shape, "c": _frac(self.c), "v_alpha": _frac(self.v_alpha),
        }


def pcf_witness(d, p):
    """The map ``z**b (z - alpha)**(a p**k)`` with ``f((b/d) alpha) = alpha``."""
    dec = decompose(d, p)
    e = dec.a * p**dec.k
    b = dec.b
    c = Fraction(d**d) / (Fraction(-e) ** e * Fraction(b) ** b)
    v_alpha = Fraction(rational_val(c, p), d - 1)
    expected = -lower_bound(d, p)
    if v_alpha != expected:
        raise AssertionError(f"v(alpha) = {v_alpha} but the bound predicts {expected}")
    return PCFWitness(d, p, dec, b, e, c, v_alpha)


@dataclass(frozen=True)
class WitnessCheck:
    f_of_alpha_is_zero: bool
    f_of_inner_critical_is_alpha: bool
    critical_set_correct: bool

    @property
    def ok(self):
        return self.f_of_alpha_is_zero and self.f_of_inner_critical_is_alpha and self.critical_set_correct

    def to_dict(self):
        return {"f_of_alpha_is_zero": self.f_of_alpha_is_zero,
                "f_of_inner_critical_is_alpha": self.f_of_inner_critical_is_alpha,
                "critical_set_correct": self.critical_set_correct}


def witness_polynomial(w):
    """Coefficients (low to high, ring elements) of ``z**b (z - alpha)**e``."""
    n = w.d - 1
    one = QuotientRingElement.scalar(w.c, n, 1)
    alpha = QuotientRingElement.alpha(w.c, n)
    return [one * 0] * w.b + _binomial_power(alpha, w.exponent, one)


def verify_pcf_witness(d, p):
    """Check the three defining identities of the witness symbolically."""
    w = pcf_witness(d, p)
    n = d - 1
    one = QuotientRingElement.scalar(w.c, n, 1)
    alpha = QuotientRingElement.alpha(w.c, n)
    f = witness_polynomial(w)
    inner = alpha * Fraction(w.b, d)
    check1 = _poly_eval(f, alpha).is_zero()
    check2 = _poly_eval(f, inner) == alpha
    deriv = [f[i] * i for i in range(1, len(f))]
    expected = [one * 0] * (w.b - 1) + [x * d for x in _binomial_power(alpha, w.exponent - 1, one)]
    expected = _times_linear(expected, inner)
    check3 = len(deriv) == len(expected) and all(x == y for x, y in zip(deriv, expected))
    return WitnessCheck(check1, check2, check3)


def valid_witness_pairs(dmax):
    """All ``(d, p)`` with ``p`` prime, ``p < d <= dmax`` and ``d`` not a power of ``p``."""
    return [(d, p) for d in range(3, dmax + 1) for p in range(2, d)
            if is_prime(p) and _power_exponent(d, p) is None]
