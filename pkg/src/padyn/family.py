"""One-parameter families of normal-form polynomials.

A family over Q_p is given by coefficient polynomials ``a_i(t)`` and critical
point polynomials ``c_j(t)``, all with rational coefficients. The critical
points are checked symbolically at construction: ``f_t'(c_j(t))`` must vanish
as a polynomial in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dynamics import BallPolynomial, MonicPolynomial
from .errors import NotACriticalPoint, ParseError
from .scalar import scalar
from .series import DEFAULT_DEGREE, ParamSeries


# polynomials in t as tuples of Fractions, low degree first


def _trim(f):
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f)


def padd(f, g):
    n = max(len(f), len(g))
    return _trim((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def pmul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return _trim(out)


def pscale(f, k):
    return _trim(Fraction(k) * x for x in f)


def is_zero_poly(f):
    return all(x == 0 for x in f)


def eval_poly(f, t):
    """Horner evaluation; ``t`` may be a scalar, series or anything with ring operations."""
    acc = None
    for x in reversed(f):
        acc = x if acc is None else acc * t + x
    return acc


def parse_poly(text):
    """``"0,-3/2"`` is ``0 - (3/2) t``: comma separated coefficients, low to high."""
    try:
        return _trim(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad polynomial {text!r}: {exc}") from None


@dataclass(frozen=True)
class PolynomialFamily:
    name: str
    p: int
    coeffs: tuple  # a_1(t), ..., a_{d-1}(t), each a tuple of Fractions
    critical_points: tuple  # c_1(t), ..., each a tuple of Fractions

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_trim(Fraction(x) for x in a) for a in self.coeffs))
        object.__setattr__(self, "critical_points",
                           tuple(_trim(Fraction(x) for x in c) for c in self.critical_points))
        self.check_critical_points()

    @property
    def degree(self):
        return len(self.coeffs) + 1

    def derivative_at(self, c):
        """``f_t'(c(t))`` as a polynomial in ``t``."""
        d = self.degree
        cpow = (Fraction(1),)
        total = (Fraction(0),)
        for i in range(1, d):
            total = padd(total, pscale(pmul(self.coeffs[i - 1], cpow), i))
            cpow = pmul(cpow, c)
        return padd(total, pscale(cpow, d))

    def check_critical_points(self):
        if len(self.critical_points) != self.degree - 1:
            raise NotACriticalPoint(f"expected {self.degree - 1} critical points")
        for j, c in enumerate(self.critical_points):
            if not is_zero_poly(self.derivative_at(c)):
                raise NotACriticalPoint(f"critical point {j} of family {self.name} is not a root of f'")

    def instantiate(self, t):
        """``(f_t, [c_j(t)])`` for a scalar parameter."""
        t = scalar(self.p, t)
        coeffs = tuple(eval_poly([scalar(self.p, x) for x in a], t) for a in self.coeffs)
        crits = [eval_poly([scalar(self.p, x) for x in c], t) for c in self.critical_points]
        return MonicPolynomial(self.p, coeffs), crits

    def instantiate_disk(self, disk, degree=DEFAULT_DEGREE, precision=None):
        """``(F, [C_j])`` with the parameter ranging over ``disk`` as a Taylor model."""
        kw = {"degree": degree}
        if precision is not None:
            kw["rel_prec"] = precision
        t = ParamSeries.parameter(disk, **kw)
        coeffs = [_series_poly(a, t) for a in self.coeffs]
        crits = [_series_poly(c, t) for c in self.critical_points]
        fb = BallPolynomial(self.p, coeffs, degree=degree, precision=t.rel_prec)
        return fb, crits

    def describe(self):
        terms = []
        for i, a in reversed(list(enumerate(self.coeffs, start=1))):
            if not is_zero_poly(a):
                terms.append(f"({_poly_str(a)}) z^{i}")
        return " + ".join([f"z^{self.degree}"] + terms)


def _series_poly(f, t):
    acc = t.lift(f[-1])
    for x in reversed(f[:-1]):
        acc = acc * t + x
    return acc


def _poly_str(f):
    parts = []
    for j, x in enumerate(f):
        if x == 0:
            continue
        xs = str(x)
        parts.append(xs if j == 0 else f"{xs}*t" if j == 1 else f"{xs}*t^{j}")
    return " + ".join(parts) if parts else "0"


CUBIC2 = PolynomialFamily(
    name="cubic2",
    p=2,
    coeffs=((0,), (0, Fraction(-3, 2))),
    critical_points=((0,), (0, 1)),
)

FAMILIES = {"cubic2": CUBIC2}


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise ParseError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None
