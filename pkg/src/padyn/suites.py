"""Built-in verification suites run by ``padyn verify``.

Each suite is a function ``(seed) -> [Check]``. Random instances come from a
``random.Random`` seeded by the caller, so reports are byte-identical between
runs. The golden constants (the ladders ``t_k = 1 + 2**(2k)`` and
``t_m = 1 + 3 * 2**(2m+1)``, the table of known radii) are the published
values the suites are meant to reproduce.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .ball import PadicBall, ball_contains, ball_subset
from .dynamics import (
    MonicPolynomial,
    classify_orbit,
    critical_count_in_disk,
    disk_degree,
    disk_image,
    invariant_zero_disk,
)
from .family import CUBIC2
from .newton import root_valuations, shift_compare
from .radius import known_radius, lower_bound, valid_witness_pairs, verify_pcf_witness
from .scalar import INF, PadicScalar, rational_val

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def random_rational(rng, p, max_num=60, max_pow=2):
    num = rng.randint(-max_num, max_num)
    den = rng.choice([1, 1, 2, 3, 5, 7, 11]) * p ** rng.randint(0, max_pow)
    return Fraction(num, den) * Fraction(p) ** rng.randint(-1, 1) if num else Fraction(0)


def random_polynomial(rng, p, d):
    return MonicPolynomial(p, tuple(PadicScalar(p, random_rational(rng, p)) for _ in range(d - 1)))


def _expand(roots):
    coeffs = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= r * c
        coeffs = nxt
    return coeffs


# -- suites -------------------------------------------------------------------------


def suite_newton(seed=DEFAULT_SEED, count=1000):
    rng = random.Random(seed)
    checks = []
    mismatches = 0
    for _ in range(count):
        p = rng.choice([2, 3, 5, 7])
        roots = [random_rational(rng, p) for _ in range(rng.randint(1, 8))]
        got = root_valuations(_expand(roots), p)
        want = sorted(INF if r == 0 else rational_val(r, p) for r in roots)
        mismatches += got != want
    checks.append(Check("root valuations of split polynomials", mismatches == 0, f"{count - mismatches}/{count}"))
    failures = 0
    for _ in range(count):
        p = rng.choice([5, 7, 11])
        d = rng.randint(2, p - 1)
        failures += not shift_compare(random_polynomial(rng, p, d)).translated_equal
    checks.append(Check("polygons of f and f' agree up to translation when p > d", failures == 0,
                        f"{count - failures}/{count}"))
    return checks


def suite_disk(seed=DEFAULT_SEED, count=300, samples=20):
    rng = random.Random(seed)
    outside = 0
    for _ in range(count):
        p = rng.choice([2, 3, 5])
        f = random_polynomial(rng, p, rng.randint(2, 6))
        center = random_rational(rng, p)
        s = rng.randint(-3, 1)
        disk = PadicBall(PadicScalar(p, center), Fraction(s))
        image = disk_image(f, disk)
        for _ in range(samples):
            z = center + rng.randint(-10**6, 10**6) * Fraction(p) ** (-s)
            outside += not ball_contains(image, f(PadicScalar(p, z)))
    checks = [Check("disk images contain the images of sampled members", outside == 0,
                    f"{count * samples - outside}/{count * samples}")]
    bad = 0
    for _ in range(count):
        p = rng.choice([2, 3, 5, 7])
        f = random_polynomial(rng, p, rng.randint(2, 6))
        sigma = invariant_zero_disk(f)
        if sigma is None:
            continue
        disk = PadicBall(PadicScalar(p, 0), sigma)
        bad += not ball_subset(disk_image(f, disk), disk)
    checks.append(Check("D(0, p^sigma*) is mapped into itself", bad == 0))
    f1 = CUBIC2.instantiate(1)[0]
    half = PadicBall(PadicScalar(2, 0), Fraction(-1))
    checks.append(Check("f_1 maps D(0, 1/2) onto itself", disk_image(f1, half) == half))
    return checks


def suite_pto1(seed=DEFAULT_SEED, count=1000):
    rng = random.Random(seed)
    seen = bad = 0
    while seen < count:
        p = rng.choice([3, 5, 7])
        f = random_polynomial(rng, p, rng.randint(2, 8))
        disk = PadicBall(PadicScalar(p, random_rational(rng, p)), Fraction(rng.randint(-3, 2)))
        m = disk_degree(f, disk)
        if m % p == 0:
            continue
        seen += 1
        bad += critical_count_in_disk(f, disk) != m - 1
    return [Check("critical points in a disk of degree m (p does not divide m) number m - 1",
                  bad == 0, f"{count - bad}/{count}")]


RADIUS_TABLE = [
    ((3, 2), "Exact", Fraction(1)),
    ((5, 3), "Exact", Fraction(3, 4)),
    ((4, 2), "Exact", Fraction(0)),
    ((8, 2), "Exact", Fraction(0)),
    ((10, 5), "Exact", Fraction(0)),
    ((6, 3), "Exact", Fraction(0)),
    ((15, 5), "Claimed", Fraction(0)),
    ((5, 2), "Bounds", Fraction(2)),
]


def suite_radius(seed=DEFAULT_SEED):
    checks = []
    for (d, p), kind, value in RADIUS_TABLE:
        ans = known_radius(d, p)
        checks.append(Check(f"r({d},{p})", ans.kind == kind and ans.value == value, str(ans)))
    primes = [q for q in range(2, 40) if all(q % r for r in range(2, q))]
    ok = all(known_radius(d, p).kind == "Exact" and known_radius(d, p).value == 0
             for d in range(2, 11) for p in primes if p > d)
    checks.append(Check("r(d,p) = 0 for p > d, d <= 10", ok))
    ok = all(lower_bound(d, p) == Fraction(p, d - 1) for d in range(3, 41) for p in primes if d < 2 * p < 2 * d)
    checks.append(Check("lower bound equals p/(d-1) when d/2 < p < d", ok))
    ok = True
    for d, p in valid_witness_pairs(40):
        ans = known_radius(d, p)
        if ans.kind == "Exact" and ans.value < lower_bound(d, p):
            ok = False
    checks.append(Check("exact values are never below the witness bound", ok))
    return checks


def suite_witness(seed=DEFAULT_SEED, dmax=40):
    failed = [f"({d},{p})" for d, p in valid_witness_pairs(dmax) if not verify_pcf_witness(d, p).ok]
    total = len(valid_witness_pairs(dmax))
    return [Check(f"witness identities for all valid (d,p) with d <= {dmax}", not failed,
                  f"{total - len(failed)}/{total}" + (f" failed: {' '.join(failed)}" if failed else ""))]


def suite_bdry(seed=DEFAULT_SEED):
    checks = []
    for k in range(2, 7):
        t = 1 + 2 ** (2 * k)
        f, crits = CUBIC2.instantiate(t)
        r = classify_orbit(f, crits[1])
        ladder = True
        for n, _, _ in r.trace:
            if 2 <= n <= k:
                z = PadicScalar.parse(r.trace[n][2], 2)
                ladder &= (z + Fraction(1, 2)).val() == 2 * k - 2 * n + 2
        ok = r.escaped and r.certificate.iterate == k + 2 and ladder
        checks.append(Check(f"t = 1 + 2^{2 * k} escapes at iterate {k + 2}", ok, r.summary()))
    for m in range(2, 7):
        t = 1 + 3 * 2 ** (2 * m + 1)
        f, crits = CUBIC2.instantiate(t)
        r = classify_orbit(f, crits[1])
        ok = r.bounded and r.certificate.iterate == m + 2 and getattr(r.certificate, "sigma", None) == -1
        checks.append(Check(f"t = 1 + 3*2^{2 * m + 1} enters D(0, 1/2) at iterate {m + 2}", ok, r.summary()))
    return checks


SUITES = {
    "newton": suite_newton,
    "disk": suite_disk,
    "pto1": suite_pto1,
    "radius": suite_radius,
    "witness": suite_witness,
    "bdry": suite_bdry,
}


def run_suite(name, seed=DEFAULT_SEED):
    return SUITES[name](seed)
