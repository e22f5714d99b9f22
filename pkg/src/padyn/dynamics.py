"""Normal-form polynomials, disk images and certified orbit classification.

A :class:`MonicPolynomial` is ``z**d + a_{d-1} z**(d-1) + ... + a_1 z`` over
Q_p. Orbit classification never guesses: an orbit is reported as escaping
only once an iterate leaves ``D(0, p**R)``, and as bounded only with a disk
certificate that can be re-checked with :func:`disk_image`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ball import NEG_INF, PadicBall, ball_contains, ball_subset
from .errors import AmbiguousValuation, NotACriticalPoint, PrecisionExhausted, Undecidable
from .newton import build_polygon, count_roots_in_disk
from .scalar import DEFAULT_PRECISION, INF, AtLeast, PadicScalar, rational_val, scalar
from .series import DEFAULT_DEGREE, ParamSeries

DEFAULT_MAX_ITER = 200
DEFAULT_MAX_PERIOD = 8
# search limits for invariant unions of disks
DEFAULT_MAX_CELLS = 64
DEFAULT_MAX_SPLIT = 10
DEFAULT_MAX_LEVEL = 10
# bit height above which an exact orbit is continued in truncated arithmetic
EXACT_HEIGHT_BITS = 2048


@dataclass(frozen=True)
class MonicPolynomial:
    """``z**d + sum a_i z**i`` with ``coeffs = (a_1, ..., a_{d-1})``."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(scalar(self.p, a) for a in self.coeffs))

    @classmethod
    def from_coefficients(cls, p, coeffs):
        """Build from a full low-to-high list ``[0, a_1, ..., a_{d-1}, 1]``."""
        coeffs = [scalar(p, c) for c in coeffs]
        if not coeffs[0].is_zero or coeffs[-1] != 1 or len(coeffs) < 3:
            raise ValueError("expected a monic polynomial of degree >= 2 with zero constant term")
        return cls(p, tuple(coeffs[1:-1]))

    @property
    def degree(self):
        return len(self.coeffs) + 1

    @property
    def is_exact(self):
        return all(a.is_exact for a in self.coeffs)

    def coefficients(self):
        """Full list ``[b_0, ..., b_d]`` (low to high)."""
        return [PadicScalar(self.p, 0), *self.coeffs, PadicScalar(self.p, 1)]

    def derivative_coefficients(self):
        c = self.coefficients()
        return [c[i] * i for i in range(1, len(c))]

    def __call__(self, z):
        z = scalar(self.p, z)
        acc = PadicScalar(self.p, 1)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc * z

    def derivative_at(self, z):
        z = scalar(self.p, z)
        acc = PadicScalar(self.p, 0)
        for b in reversed(self.derivative_coefficients()):
            acc = acc * z + b
        return acc

    def __str__(self):
        d = self.degree
        terms = [f"z^{d}"]
        for i in range(d - 1, 0, -1):
            a = self.coeffs[i - 1]
            if a.is_zero:
                continue
            zpart = "z" if i == 1 else f"z^{i}"
            terms.append(f"({a})*{zpart}")
        return " + ".join(terms)


def _certain(x, what):
    v = x.val()
    if isinstance(v, AtLeast):
        raise AmbiguousValuation(f"{what} is only known to be O(p^{int(v)})")
    return v


def escape_radius(f):
    """``R = max(0, max_i -v(a_i)/(d-i))``; ``|z| > p**R`` implies ``|f(z)| = |z|**d``."""
    d = f.degree
    best = Fraction(0)
    for i, a in enumerate(f.coeffs, start=1):
        v = _certain(a, f"a_{i}")
        if v == INF:
            continue
        best = max(best, Fraction(-v, d - i))
    return best


def taylor_shift(f, a):
    """Coefficients ``b_0..b_d`` of ``f(a + w)`` in powers of ``w``."""
    a = scalar(f.p, a)
    b = f.coefficients()
    n = len(b)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] = b[j] + a * b[j + 1]
    return b


def _image_data(f, disk):
    if disk.p != f.p:
        raise ValueError("prime mismatch")
    b = taylor_shift(f, disk.center)
    s = disk.radius_exp
    if s == NEG_INF:
        return b[0], NEG_INF, 1
    best = None
    m = None
    for i in range(1, len(b)):
        v = _certain(b[i], f"shift coefficient b_{i}")
        if v == INF:
            continue
        r = s * i - v
        if best is None or r >= best:
            best, m = r, i
    return b[0], best, m


def disk_image(f, disk):
    """The exact image ``f(D(a, p**s)) = D(f(a), p**r)``, ``r = max_i (s*i - v(b_i))``."""
    center, r, _ = _image_data(f, disk)
    return PadicBall(center, r)


def disk_degree(f, disk):
    """The constant number of preimages in ``disk`` (largest index attaining the max)."""
    _, _, m = _image_data(f, disk)
    return m


def critical_count_in_disk(f, disk):
    """Roots of ``f'`` in ``disk`` with multiplicity."""
    b = taylor_shift(f, disk.center)
    deriv = [b[i] * i for i in range(1, len(b))]
    if disk.is_point:
        return build_polygon(deriv).zero_root_count
    return count_roots_in_disk(build_polygon(deriv), disk.radius_exp)


def from_critical_points(p, critical_points):
    """The normal-form ``f`` with ``f' = d * prod(z - c_i)``."""
    cs = [scalar(p, c) for c in critical_points]
    d = len(cs) + 1
    prod = [PadicScalar(p, 1)]
    for c in cs:
        nxt = [PadicScalar(p, 0)] * (len(prod) + 1)
        for j, e in enumerate(prod):
            nxt[j + 1] = nxt[j + 1] + e
            nxt[j] = nxt[j] - c * e
        prod = nxt
    coeffs = [prod[i - 1] * Fraction(d, i) for i in range(1, d)]
    return MonicPolynomial(p, tuple(coeffs))


def invariant_zero_disk(f):
    """Largest ``sigma <= 0`` of the form ``min(0, v(a_i)/(i-1))`` with ``f(D(0,p**sigma))`` inside itself.

    Returns None when ``|a_1| > 1``: then no disk about 0 is mapped into itself.
    """
    v1 = _certain(f.coeffs[0], "a_1") if f.coeffs else INF
    if v1 < 0:
        return None
    sigma = Fraction(0)
    for i in range(2, f.degree):
        v = _certain(f.coeffs[i - 1], f"a_{i}")
        if v == INF:
            continue
        sigma = min(sigma, Fraction(v, i - 1))
    return sigma


# -- classification results -------------------------------------------------------


@dataclass(frozen=True)
class EscapeWitness:
    iterate: int
    valuation: int
    escape_radius: Fraction

    def to_dict(self):
        return {"kind": "Escape", "iterate": self.iterate, "valuation": _num(self.valuation),
                "escape_radius": _num(self.escape_radius)}


@dataclass(frozen=True)
class InvariantDisk:
    sigma: Fraction
    iterate: int

    def to_dict(self):
        return {"kind": "InvariantDisk", "sigma": _num(self.sigma), "iterate": self.iterate}


@dataclass(frozen=True)
class Cycle:
    period: int
    anchor: PadicBall
    iterate: int

    def to_dict(self):
        return {"kind": "Cycle", "period": self.period, "anchor": str(self.anchor), "iterate": self.iterate}


@dataclass(frozen=True)
class InvariantUnion:
    """A finite union of disks that, together with ``D(0, p**sigma)``, contains its own image.

    The image is only required over Q_p: each cell is split into subdisks (at
    most ``split_depth`` levels) and every piece must map into a cell or the
    basin. Over Q_p a disk can map onto a strictly smaller set than the
    ``C_p`` image formula predicts, which is what makes splitting useful.
    """

    cells: tuple
    sigma: Fraction | None
    iterate: int
    split_depth: int = DEFAULT_MAX_SPLIT

    def to_dict(self):
        return {"kind": "InvariantUnion", "cells": [str(c) for c in self.cells],
                "sigma": None if self.sigma is None else _num(self.sigma),
                "iterate": self.iterate, "split_depth": self.split_depth}


@dataclass(frozen=True)
class OrbitClassification:
    verdict: str  # "Escaped" | "Bounded" | "Unknown"
    certificate: object = None
    reason: str | None = None  # for Unknown: IterBudget | PrecisionExhausted | Undecidable
    trace: tuple = ()
    budgets: dict = field(default_factory=dict)

    @property
    def iterate(self):
        return None if self.certificate is None else self.certificate.iterate

    @property
    def escaped(self):
        return self.verdict == "Escaped"

    @property
    def bounded(self):
        return self.verdict == "Bounded"

    def summary(self):
        c = self.certificate
        if self.verdict == "Escaped":
            return f"Escaped({c.iterate})"
        if self.verdict == "Bounded":
            if isinstance(c, Cycle):
                return f"Bounded(Cycle period {c.period})"
            if isinstance(c, InvariantUnion):
                return f"Bounded(InvariantUnion {len(c.cells)} disks)"
            return f"Bounded(InvariantDisk sigma={_num(c.sigma)})"
        return f"Unknown({self.reason})"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "reason": self.reason,
            "trace": [[n, _num(v), s] for n, v, s in self.trace],
            "budgets": dict(self.budgets),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _num(x):
    if isinstance(x, AtLeast):
        return str(x)
    if x == INF:
        return "inf"
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _height(z):
    q = z.to_fraction()
    return max(q.numerator.bit_length(), q.denominator.bit_length())


def _compose_images(f, disk, times):
    for _ in range(times):
        disk = disk_image(f, disk)
    return disk


def verify_certificate(f, cert):
    """Re-check a Bounded certificate using only :func:`disk_image`."""
    if isinstance(cert, InvariantDisk):
        d = PadicBall(PadicScalar(f.p, 0), cert.sigma)
        return ball_subset(disk_image(f, d), d)
    if isinstance(cert, Cycle):
        return ball_subset(_compose_images(f, cert.anchor, cert.period), cert.anchor)
    if isinstance(cert, InvariantUnion):
        return check_invariant_union(f, cert.cells, cert.sigma, cert.split_depth)
    raise TypeError(f"not a bounded certificate: {cert!r}")


def _try_cycle(f, anchor, current, period, radius_candidates):
    """Look for ``s`` with ``f^period(D(anchor, p**s))`` inside ``D(anchor, p**s)``."""
    for s in radius_candidates:
        disk = PadicBall(anchor, s)
        try:
            if not ball_contains(disk, current):
                continue
            if ball_subset(_compose_images(f, disk, period), disk):
                return disk
        except (AmbiguousValuation, Undecidable):
            continue
    return None


def classify_orbit(f, z0, max_iter=DEFAULT_MAX_ITER, precision=DEFAULT_PRECISION, max_period=DEFAULT_MAX_PERIOD):
    """Classify the forward orbit of ``z0`` under ``f``.

    Exact inputs are iterated exactly (so exact periodicity is a certificate)
    until the rationals grow past ``EXACT_HEIGHT_BITS``, then in truncated
    arithmetic with ``precision`` digits. On precision exhaustion the run is
    repeated once at twice the precision.
    """
    result = _classify_orbit(f, z0, max_iter, precision, max_period)
    if result.reason == "PrecisionExhausted":
        result = _classify_orbit(f, z0, max_iter, 2 * precision, max_period)
    return result


def _classify_orbit(f, z0, max_iter, precision, max_period):
    p = f.p
    budgets = {"max_iter": max_iter, "precision": precision}
    R = escape_radius(f)
    sigma = invariant_zero_disk(f)
    z = scalar(p, z0)
    if not z.is_exact:
        z = z.truncate(precision)
    trace = []
    seen = {}
    history = []
    last_try = {}

    def done(verdict, cert=None, reason=None):
        return OrbitClassification(verdict, cert, reason, tuple(trace), budgets)

    for n in range(max_iter + 1):
        v = z.val()
        trace.append((n, v, str(z)))
        if isinstance(v, AtLeast):
            if sigma is not None and v >= -sigma:
                return done("Bounded", InvariantDisk(sigma, n))
            return done("Unknown", reason="PrecisionExhausted")
        if v != INF and -v > R:
            return done("Escaped", EscapeWitness(n, v, R))
        if sigma is not None and v >= -sigma:
            return done("Bounded", InvariantDisk(sigma, n))
        if z.is_exact:
            if z in seen:
                m = seen[z]
                return done("Bounded", Cycle(n - m, PadicBall.point(z), m))
            seen[z] = n
        else:
            for j in range(1, min(max_period, n) + 1):
                prev = history[n - j]
                agree = int((z - prev).val())
                if agree <= v or last_try.get(j, -1) >= agree:
                    continue
                last_try[j] = agree
                candidates = [Fraction(s) for s in range(-agree, -agree + 6) if s <= R]
                disk = _try_cycle(f, prev, z, j, candidates)
                if disk is not None:
                    return done("Bounded", Cycle(j, disk, n - j))
        if _union_attempt(n) or n == max_iter:
            cells = search_invariant_union(f, PadicBall(z, NEG_INF), sigma, R)
            if cells is not None:
                return done("Bounded", InvariantUnion(cells, sigma, n))
        history.append(z)
        if n == max_iter:
            break
        try:
            z = f(z)
        except PrecisionExhausted:
            return done("Unknown", reason="PrecisionExhausted")
        if z.is_exact:
            if _height(z) > EXACT_HEIGHT_BITS:
                z = z.truncate(precision)
        else:
            z = z.truncate(precision)
    return done("Unknown", reason="IterBudget")


# -- invariant unions of disks ------------------------------------------------------


def coefficient_balls(f):
    """``[(center, radius_exp)]`` enclosing each ``a_i`` of a plain or ball polynomial."""
    out = []
    for a in f.coeffs:
        if isinstance(a, ParamSeries):
            enc = a.enclosure()
            out.append((enc.center_q, enc.radius_exp))
        elif a.is_exact:
            out.append((a.to_fraction(), NEG_INF))
        else:
            out.append((a.to_fraction(), Fraction(-a.abs_prec)))
    return out


def enclose_image(p, balls, disk):
    """A ball containing ``f(z)`` for every ``z`` in ``disk`` and every coefficient choice.

    The center polynomial is handled by the image formula at the disk center;
    the coefficient spread adds ``rho_i + i * log_p max|z|`` for each ``a_i``.
    """
    a = disk.center_q
    s = disk.radius_exp
    b = [Fraction(0)] + [c for c, _ in balls] + [Fraction(1)]
    n = len(b)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] += a * b[j + 1]
    r = NEG_INF
    if s != NEG_INF:
        for i in range(1, n):
            if b[i]:
                r = max(r, s * i - rational_val(b[i], p))
    mu = max(-rational_val(a, p) if a else NEG_INF, s)
    for i, (_, rho) in enumerate(balls, start=1):
        if rho != NEG_INF and mu != NEG_INF:
            r = max(r, rho + i * mu)
    return PadicBall(PadicScalar(p, b[0]), r)


def _basin(p, sigma):
    return None if sigma is None else PadicBall(PadicScalar(p, 0), sigma)


def _in_union(ball, cells, basin):
    if basin is not None and ball_subset(ball, basin):
        return True
    return any(ball_subset(ball, c) for c in cells)


def _splittable(disk):
    return not disk.is_point and disk.radius_exp.denominator == 1


def _grow_union(p, balls, start, basin, R, level, max_cells, max_split):
    cells = [start]
    work = [start]
    while work:
        stack = [(work.pop(), 0)]
        while stack:
            piece, depth = stack.pop()
            image = enclose_image(p, balls, piece)
            if _in_union(image, cells, basin):
                continue
            v = image.exact_val()
            if v is not None and -v > R:
                return None  # the piece escapes
            if image.radius_exp <= -level:
                cell = PadicBall(image.center, Fraction(-level))
                cells.append(cell)
                work.append(cell)
                if len(cells) > max_cells:
                    return None
                continue
            if depth >= max_split or not _splittable(piece):
                return None
            stack.extend((c, depth + 1) for c in piece.children())
    return tuple(cells)


def search_invariant_union(f, start, sigma, R, levels=None, max_cells=DEFAULT_MAX_CELLS,
                           max_split=DEFAULT_MAX_SPLIT):
    """Look for a finite union of disks containing ``start`` that maps into itself.

    ``f`` is a :class:`MonicPolynomial` or :class:`BallPolynomial`. New cells
    have radius ``p**-level``; each level in ``levels`` is tried in turn. A
    point ``start`` is widened to the cell radius. Returns the cells or None.
    """
    p = f.p
    balls = coefficient_balls(f)
    basin = _basin(p, sigma)
    if levels is None:
        levels = range(1, DEFAULT_MAX_LEVEL + 1)
    for level in levels:
        first = start if _splittable(start) else PadicBall(start.center, Fraction(-level))
        try:
            cells = _grow_union(p, balls, first, basin, R, level, max_cells, max_split)
        except (AmbiguousValuation, Undecidable):
            cells = None
        if cells is not None:
            return cells
    return None


def check_invariant_union(f, cells, sigma, max_split=DEFAULT_MAX_SPLIT):
    """Re-check that every cell maps into the cells plus ``D(0, p**sigma)``."""
    p = f.p
    balls = coefficient_balls(f)
    basin = _basin(p, sigma)

    def covered(piece, depth):
        if _in_union(enclose_image(p, balls, piece), cells, basin):
            return True
        if depth >= max_split or not _splittable(piece):
            return False
        return all(covered(c, depth + 1) for c in piece.children())

    return all(covered(c, 0) for c in cells)


# orbits get this many iterates to reach a disk or cycle certificate before
# the (costlier) union search is tried, then again at every doubling
UNION_FIRST_ATTEMPT = 16


def _union_attempt(n):
    return n >= UNION_FIRST_ATTEMPT and n & (n - 1) == 0


# -- whole-disk classification ------------------------------------------------------


class BallPolynomial:
    """A normal-form polynomial whose coefficients range over balls or parameter series.

    Coefficients and orbit values are :class:`~padyn.series.ParamSeries`; a
    plain :class:`PadicBall` is converted to a parameter-independent series.
    """

    def __init__(self, p, coeffs, degree=DEFAULT_DEGREE, precision=DEFAULT_PRECISION):
        self.p = p
        self.series_degree = degree
        self.precision = precision
        self.coeffs = tuple(self.lift(a) for a in coeffs)

    def lift(self, x):
        if isinstance(x, ParamSeries):
            return x
        if isinstance(x, PadicBall):
            return ParamSeries.from_ball(x, self.series_degree, self.precision)
        x = scalar(self.p, x)
        base = ParamSeries.constant(self.p, 0, degree=self.series_degree, rel_prec=self.precision)
        return base.lift(x)

    @property
    def degree(self):
        return len(self.coeffs) + 1

    def __call__(self, z):
        z = self.lift(z)
        acc = self.lift(1)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc * z

    def escape_radius(self):
        """Worst case of ``R`` over every coefficient choice."""
        d = self.degree
        best = Fraction(0)
        for i, a in enumerate(self.coeffs, start=1):
            g = a.gauss_val()
            if g == INF:
                continue
            best = max(best, Fraction(-g, d - i))
        return best

    def invariant_zero_disk(self):
        """A ``sigma`` that works for every coefficient choice, or None."""
        if self.coeffs and self.coeffs[0].gauss_val() < 0:
            return None
        sigma = Fraction(0)
        for i in range(2, self.degree):
            g = self.coeffs[i - 1].gauss_val()
            if g == INF:
                continue
            sigma = min(sigma, Fraction(g, i - 1))
        return sigma


def classify_orbit_ball(f_ball, z0, max_iter=DEFAULT_MAX_ITER, precision=DEFAULT_PRECISION,
                        max_period=DEFAULT_MAX_PERIOD, union_history=6):
    """Classify every orbit in a family at once.

    ``f_ball`` is a :class:`BallPolynomial` (or a sequence of coefficient balls
    ``a_1..a_{d-1}``), ``z0`` a ball or series. A verdict other than Unknown
    holds for every member of every input ball simultaneously.
    """
    if not isinstance(f_ball, BallPolynomial):
        coeffs = list(f_ball)
        p = next(c.p for c in coeffs)
        f_ball = BallPolynomial(p, coeffs, precision=precision)
    p = f_ball.p
    budgets = {"max_iter": max_iter, "precision": precision}
    R = f_ball.escape_radius()
    sigma = f_ball.invariant_zero_disk()
    z = f_ball.lift(z0)
    trace = []
    history = []

    def done(verdict, cert=None, reason=None):
        return OrbitClassification(verdict, cert, reason, tuple(trace), budgets)

    def union_or(reason):
        # direct iteration failed; look for an invariant union around an early enclosure
        for n, enc in enumerate(history[:union_history]):
            if n == 0 or enc.radius_exp > R:
                continue
            cells = search_invariant_union(f_ball, enc, sigma, R)
            if cells is not None:
                return done("Bounded", InvariantUnion(cells, sigma, n))
        return done("Unknown", reason=reason)

    for n in range(max_iter + 1):
        enc = z.enclosure()
        g = z.gauss_val()
        trace.append((n, g if g != INF else INF, str(enc)))
        v = z.const_val()
        if v is not None and -v > R:
            return done("Escaped", EscapeWitness(n, v, R))
        if sigma is not None and g >= -sigma:
            return done("Bounded", InvariantDisk(sigma, n))
        if enc.radius_exp > R:
            # the enclosure already straddles the escape circle; it only grows from here
            return union_or("Undecidable")
        for j in range(1, min(max_period, n) + 1):
            anchor = history[n - j]
            try:
                if not ball_subset(enc, anchor):
                    continue
                image = anchor
                for _ in range(j):
                    image = f_ball(image).enclosure()
                if ball_subset(image, anchor):
                    return done("Bounded", Cycle(j, anchor, n - j))
            except (AmbiguousValuation, Undecidable):
                continue
        history.append(enc)
        if n == max_iter:
            break
        z = f_ball(z)
    return union_or("IterBudget")


# -- PCB ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PCBResult:
    verdict: str  # "PCB" | "NotPCB" | "Unknown"
    classifications: tuple

    def to_dict(self):
        return {"verdict": self.verdict, "critical_orbits": [c.to_dict() for c in self.classifications]}


def combine_verdicts(classifications):
    if any(c.escaped for c in classifications):
        return "NotPCB"
    if all(c.bounded for c in classifications):
        return "PCB"
    return "Unknown"


def is_pcb(f, critical_points, max_iter=DEFAULT_MAX_ITER, precision=DEFAULT_PRECISION):
    """Decide whether every supplied critical point has bounded orbit.

    The caller supplies the critical points; each one is checked against
    ``f'`` first.
    """
    cs = [scalar(f.p, c) for c in critical_points]
    for c in cs:
        fc = f.derivative_at(c)
        if fc.is_exact and not fc.is_zero:
            raise NotACriticalPoint(f"f'({c}) = {fc} != 0")
        if not fc.is_exact and not fc.is_inexact_zero:
            raise NotACriticalPoint(f"f'({c}) = {fc} is not small")
    results = []
    for c in cs:
        results.append(classify_orbit(f, c, max_iter=max_iter, precision=precision))
    return PCBResult(combine_verdicts(results), tuple(results))

