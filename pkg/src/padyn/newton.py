"""Newton polygons over Q_p.

The polygon of ``sum b_i z^i`` is the lower convex hull of the points
``(i, v(b_i))`` for nonzero ``b_i``. A segment of slope ``m`` and horizontal
length ``x`` accounts for ``x`` roots of absolute value ``p**m``, i.e. of
valuation ``-m``. Roots at ``z = 0`` are counted separately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousValuation, DomainError
from .scalar import INF, AtLeast, PadicScalar, scalar


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple  # ((index, valuation), ...) with valuation a Fraction
    zero_root_count: int
    degree: int

    @property
    def segments(self):
        """``((slope, hlength), ...)`` left to right."""
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0, i1 - i0), i1 - i0))
        return tuple(out)

    def to_dict(self):
        return {
            "vertices": [[i, _frac_str(v)] for i, v in self.vertices],
            "segments": [[_frac_str(m), x] for m, x in self.segments],
            "zero_roots": self.zero_root_count,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _frac_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points):
    """Monotone-chain lower hull of points sorted by x; collinear interior points dropped."""
    hull = []
    for pt in points:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def point_valuations(coeffs):
    """``[(i, v(b_i))]`` over nonzero coefficients; inexact zeros are refused."""
    pts = []
    for i, c in enumerate(coeffs):
        v = c.val()
        if isinstance(v, AtLeast):
            raise AmbiguousValuation(f"coefficient {i} is only known to be O(p^{int(v)})")
        if v != INF:
            pts.append((i, Fraction(v)))
    return pts


def build_polygon(coeffs, p=None):
    """Newton polygon of ``coeffs[0] + coeffs[1] z + ...`` (low to high)."""
    coeffs = _as_scalars(coeffs, p)
    if not coeffs or coeffs[-1].is_zero:
        raise DomainError("leading coefficient must be nonzero")
    pts = point_valuations(coeffs)
    return NewtonPolygon(tuple(lower_hull(pts)), pts[0][0], len(coeffs) - 1)


def _as_scalars(coeffs, p):
    coeffs = list(coeffs)
    if p is None:
        p = next((c.p for c in coeffs if isinstance(c, PadicScalar)), None)
        if p is None:
            raise ValueError("a prime is needed when no coefficient is a PadicScalar")
    return [scalar(p, c) for c in coeffs]


def root_valuations(coeffs, p=None):
    """Multiset (sorted list) of root valuations, ``inf`` for roots at 0."""
    poly = coeffs if isinstance(coeffs, NewtonPolygon) else build_polygon(coeffs, p)
    out = []
    for m, x in poly.segments:
        out.extend([-m] * x)
    out.extend([INF] * poly.zero_root_count)
    return sorted(out)


def count_roots_in_disk(coeffs, s, p=None):
    """Number of roots (with multiplicity) in ``D(0, p**s)``."""
    poly = coeffs if isinstance(coeffs, NewtonPolygon) else build_polygon(coeffs, p)
    return poly.zero_root_count + sum(x for m, x in poly.segments if m <= s)


@dataclass(frozen=True)
class ShiftReport:
    derivative: NewtonPolygon
    polygon: NewtonPolygon
    translated_equal: bool


def shift_compare(f, p=None):
    """Compare the polygons of a normal-form ``f`` and of ``f'``.

    ``f`` is a :class:`~padyn.dynamics.MonicPolynomial` or a full coefficient
    list with zero constant term.
    """
    coeffs = f.coefficients() if hasattr(f, "coefficients") else _as_scalars(f, p)
    if not coeffs[0].is_zero:
        raise DomainError("shift_compare needs a polynomial with zero constant term")
    deriv = [coeffs[i] * i for i in range(1, len(coeffs))]
    pf = build_polygon(coeffs)
    pd = build_polygon(deriv)
    equal = pf.segments == pd.segments and pf.zero_root_count - 1 == pd.zero_root_count
    return ShiftReport(pd, pf, equal)
