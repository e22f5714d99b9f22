import random
from fractions import Fraction

import pytest

from padyn import (
    CUBIC2,
    Cycle,
    InvariantDisk,
    InvariantUnion,
    MonicPolynomial,
    PadicBall,
    PadicScalar,
    ball_contains,
    classify_orbit,
    classify_orbit_ball,
    critical_count_in_disk,
    disk_degree,
    disk_image,
    escape_radius,
    from_critical_points,
    invariant_zero_disk,
    is_pcb,
    taylor_shift,
    verify_certificate,
)
from padyn.dynamics import check_invariant_union, enclose_image, coefficient_balls
from padyn.errors import NotACriticalPoint
from padyn.radius import pcf_witness, valid_witness_pairs, witness_polynomial
from padyn.scalar import INF, rational_val
from padyn.suites import random_polynomial

H = Fraction(3, 2)


def cubic(t):
    return MonicPolynomial(2, (0, -H * Fraction(t)))


F1 = cubic(1)


def D(c, s, p=2):
    return PadicBall(PadicScalar(p, Fraction(c)), Fraction(s))


# -- examples -----------------------------------------------------------------------


def test_escape_radius_examples():
    assert escape_radius(F1) == 1
    assert escape_radius(MonicPolynomial(2, (0, 0))) == 0
    assert escape_radius(cubic(Fraction(1, 4))) == 3


def test_taylor_shift_examples():
    assert taylor_shift(MonicPolynomial(2, (0,)), 1) == [1, 2, 1]
    assert taylor_shift(F1, 1) == [Fraction(-1, 2), 0, H, 1]
    f = MonicPolynomial(5, (3, Fraction(1, 5), 7))
    assert taylor_shift(f, 0) == [0, 3, Fraction(1, 5), 7, 1]


def test_disk_image_examples():
    assert disk_image(F1, D(0, -1)) == D(0, -1)
    assert disk_image(F1, D(0, 0)) == D(0, 1)
    assert disk_image(MonicPolynomial(3, (1,)), D(0, 0, 3)) == D(0, 0, 3)


def test_disk_degree_examples():
    assert disk_degree(MonicPolynomial(3, (1,)), D(0, 0, 3)) == 2
    assert disk_degree(F1, D(0, -1)) == 2
    assert disk_degree(F1, D(0, -10)) == 2


def test_critical_count_examples():
    assert critical_count_in_disk(MonicPolynomial(3, (1,)), D(0, 0, 3)) == 1
    assert critical_count_in_disk(F1, D(0, -1)) == 1
    assert critical_count_in_disk(F1, D(1, -2)) == 1


def test_from_critical_points_examples():
    assert from_critical_points(2, [0, 5]) == cubic(5)
    assert from_critical_points(2, [7]) == MonicPolynomial(2, (-14,))
    assert from_critical_points(2, [1, 1]) == MonicPolynomial(2, (3, -3))


def test_invariant_zero_disk_examples():
    assert invariant_zero_disk(F1) == -1
    assert invariant_zero_disk(MonicPolynomial(2, (0, 0))) == 0
    assert invariant_zero_disk(cubic(2)) == 0
    assert invariant_zero_disk(MonicPolynomial(3, (Fraction(1, 3),))) is None


def test_classify_orbit_examples():
    r = classify_orbit(F1, 1)
    assert r.bounded and isinstance(r.certificate, Cycle)
    assert r.certificate.period == 1 and r.certificate.iterate == 1
    assert r.summary() == "Bounded(Cycle period 1)"

    r = classify_orbit(cubic(17), 17)
    assert r.escaped and r.certificate.iterate == 4 and r.summary() == "Escaped(4)"

    r = classify_orbit(cubic(97), 97)
    assert r.bounded and r.certificate == InvariantDisk(Fraction(-1), 4)


def test_classify_orbit_ball_examples():
    fb, crits = CUBIC2.instantiate_disk(D(17, -5))
    assert classify_orbit_ball(fb, crits[1]).escaped
    fb, crits = CUBIC2.instantiate_disk(D(0, -1))
    assert classify_orbit_ball(fb, crits[1]).bounded
    fb, crits = CUBIC2.instantiate_disk(D(1, 0))
    assert classify_orbit_ball(fb, crits[1], max_iter=10).verdict == "Unknown"


def test_is_pcb_examples():
    assert is_pcb(F1, [0, 1]).verdict == "PCB"
    assert is_pcb(cubic(17), [0, 17]).verdict == "NotPCB"
    assert is_pcb(MonicPolynomial(5, (0, 1)), [0, Fraction(-2, 3)]).verdict == "PCB"
    with pytest.raises(NotACriticalPoint):
        is_pcb(F1, [0, 2])


def test_json_has_fixed_field_order():
    r = classify_orbit(cubic(17), 17)
    assert list(r.to_dict()) == ["verdict", "certificate", "reason", "trace", "budgets"]
    assert r.to_dict()["certificate"] == {"kind": "Escape", "iterate": 4, "valuation": -2, "escape_radius": 1}


def test_budget_exhaustion_is_unknown():
    # t = 1 + 2^12 escapes only at iterate 8
    t = 1 + 2**12
    r = classify_orbit(cubic(t), t, max_iter=5)
    assert r.verdict == "Unknown" and r.reason == "IterBudget"
    assert len(r.trace) == 6 and r.budgets == {"max_iter": 5, "precision": 128}
    assert classify_orbit(cubic(t), t).summary() == "Escaped(8)"


# -- disk degree against a preimage oracle ------------------------------------------


def test_disk_degree_matches_root_count_oracle():
    """For ``f = z * prod(z - r_i)`` and a disk containing a root, 0 lies in ``f(D)``,
    so the disk degree equals the number of roots of ``f`` inside the disk."""
    rng = random.Random(4)
    for _ in range(500):
        p = rng.choice([2, 3, 5])
        roots = [Fraction(0)] + [Fraction(rng.randint(-40, 40), rng.choice([1, 1, 2, 3, 5])) for _ in range(rng.randint(1, 5))]
        coeffs = [Fraction(1)]
        for r in roots:
            coeffs = [(coeffs[i - 1] if i else 0) - r * (coeffs[i] if i < len(coeffs) else 0)
                      for i in range(len(coeffs) + 1)]
        f = MonicPolynomial(p, tuple(coeffs[1:-1]))
        anchor = rng.choice(roots)
        s = rng.randint(-3, 2)
        center = anchor + Fraction(p) ** (-s) * rng.randint(-5, 5)
        disk = D(center, s, p)
        inside = sum(1 for r in roots if r == center or rational_val(r - center, p) >= -s)
        assert disk_degree(f, disk) == inside


def test_disk_image_contains_sampled_images():
    rng = random.Random(8)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        f = random_polynomial(rng, p, rng.randint(2, 6))
        c, s = Fraction(rng.randint(-30, 30)), rng.randint(-3, 1)
        image = disk_image(f, D(c, s, p))
        for _ in range(20):
            z = c + Fraction(p) ** (-s) * rng.randint(-999, 999)
            assert ball_contains(image, f(z))


# -- certificates -------------------------------------------------------------------


def _random_orbits(rng, count):
    for _ in range(count):
        p = rng.choice([2, 3, 5])
        f = random_polynomial(rng, p, rng.randint(2, 4))
        z0 = Fraction(rng.randint(-20, 20), rng.choice([1, 1, 2, 3]))
        yield f, z0


def test_bounded_certificates_reverify():
    rng = random.Random(9)
    kinds = set()
    for f, z0 in _random_orbits(rng, 150):
        r = classify_orbit(f, z0, max_iter=40)
        if r.bounded:
            kinds.add(type(r.certificate).__name__)
            assert verify_certificate(f, r.certificate)
    assert {"InvariantDisk", "Cycle"} <= kinds


def test_escape_soundness():
    rng = random.Random(10)
    escapes = 0
    for f, z0 in _random_orbits(rng, 150):
        r = classify_orbit(f, z0, max_iter=40)
        if not r.escaped:
            continue
        escapes += 1
        R = escape_radius(f)
        n = r.certificate.iterate
        z = PadicScalar(f.p, z0)
        for _ in range(n):
            z = f(z)
        v = z.val()
        assert v == r.certificate.valuation and -v > R
        assert f(z).val() == f.degree * v  # |f(z)| = |z|^d outside the escape disk
    assert escapes > 10


def test_invariant_union_certificates():
    # these parameters have bounded free orbits that never reach D(0, 1/2) or an exact cycle
    for t in (161, 417, 641):
        f, crits = CUBIC2.instantiate(t)
        r = classify_orbit(f, crits[1])
        assert r.bounded and isinstance(r.certificate, InvariantUnion)
        assert verify_certificate(f, r.certificate)
        cert = r.certificate
        # the last iterate before the certificate is inside the union
        z = PadicScalar.from_rational(2, Fraction(t), 256)
        for _ in range(cert.iterate):
            z = f(z).truncate(256)
        assert any(ball_contains(c, z) for c in cert.cells)


def test_invariant_union_rejects_escaping_cells():
    f = cubic(17)
    assert not check_invariant_union(f, (D(17, -3),), invariant_zero_disk(f))


def test_enclose_image_is_sound_for_ball_coefficients():
    rng = random.Random(12)
    for _ in range(200):
        p = rng.choice([2, 3])
        coeffs = [D(rng.randint(-9, 9), rng.randint(-4, -1), p) for _ in range(rng.randint(1, 3))]
        balls = [(c.center_q, c.radius_exp) for c in coeffs]
        disk = D(rng.randint(-9, 9), rng.randint(-4, 0), p)
        image = enclose_image(p, balls, disk)
        for _ in range(10):
            a = [c.center_q + Fraction(p) ** (-c.radius_exp) * rng.randint(-50, 50) for c in coeffs]
            z = disk.center_q + Fraction(p) ** (-disk.radius_exp) * rng.randint(-50, 50)
            assert ball_contains(image, MonicPolynomial(p, tuple(a))(z))


def test_coefficient_balls_of_exact_polynomial_are_points():
    assert all(r == float("-inf") for _, r in coefficient_balls(F1))


# -- theorems as properties ---------------------------------------------------------


def test_integral_critical_points_give_pcb():
    rng = random.Random(13)
    for _ in range(100):
        p = rng.choice([5, 7, 11])
        d = rng.randint(2, p - 1)
        crits = [rng.randint(-30, 30) for _ in range(d - 1)]
        r = is_pcb(from_critical_points(p, crits), crits)
        assert r.verdict == "PCB"
        assert all(isinstance(c.certificate, InvariantDisk) and c.certificate.sigma == 0
                   for c in r.classifications)


def _coefficient_valuations(w):
    """Valuations of the witness coefficients; each is a single reduced monomial ``x * alpha**j``."""
    vals = []
    for coeff in witness_polynomial(w):
        terms = [(j, x) for j, x in enumerate(coeff.coeffs) if x]
        if not terms:
            vals.append(INF)
            continue
        (j, x), = terms
        vals.append(rational_val(x, w.p) + j * w.v_alpha)
    return vals


def test_escape_radius_equals_critical_radius_on_witnesses():
    """On witnesses with ``r > 0`` and ``p > d/2``, ``R`` equals the largest ``-v(c)`` over critical points."""
    checked = 0
    for d, p in valid_witness_pairs(30):
        if 2 * p <= d:
            continue
        w = pcf_witness(d, p)
        if w.v_alpha >= 0:
            continue
        vals = _coefficient_valuations(w)
        assert vals[0] == INF and vals[d] == 0
        R = max([Fraction(0)] + [Fraction(-v, d - i) for i, v in enumerate(vals[1:d], start=1) if v != INF])
        # critical points are 0, alpha and (b/d) alpha
        crit = max(0, -w.v_alpha, -(w.v_alpha + rational_val(Fraction(w.b, d), p)))
        assert R == crit == -w.v_alpha
        if w.v_alpha.denominator == 1:
            # a rational stand-in with the same coefficient valuations
            stand_in = MonicPolynomial(p, tuple(0 if v == INF else Fraction(p) ** int(v) for v in vals[1:d]))
            assert escape_radius(stand_in) == R
        checked += 1
    assert checked > 20


def test_ball_and_point_classification_agree():
    """Whenever a ball orbit is certified, 20 random members get the same verdict."""
    rng = random.Random(14)
    certified = 0
    for _ in range(120):
        p = rng.choice([2, 3, 5])
        d = rng.randint(2, 4)
        coeffs = [D(rng.randint(-20, 20), rng.randint(-6, -2), p) for _ in range(d - 1)]
        z0 = D(Fraction(rng.randint(-20, 20), rng.choice([1, 1, p])), rng.randint(-6, -2), p)
        r = classify_orbit_ball(coeffs, z0, max_iter=30)
        if r.verdict == "Unknown":
            continue
        certified += 1
        for _ in range(20):
            a = tuple(c.center_q + Fraction(p) ** (-c.radius_exp) * rng.randint(-99, 99) for c in coeffs)
            z = z0.center_q + Fraction(p) ** (-z0.radius_exp) * rng.randint(-99, 99)
            point = classify_orbit(MonicPolynomial(p, a), z, max_iter=60)
            assert point.verdict == r.verdict, (coeffs, z0, a, z)
    assert certified > 30
