"""Command-line entry point: ``padyn <command> ...``.

Exit codes: ``classify`` returns 0 for PCB, 1 for NotPCB and 2 for Unknown;
``verify`` and ``witness`` return 0 only when every check passes; usage and
parse errors return 64.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .ball import PadicBall
from .errors import DomainError, ParseError, PrecisionExhausted
from .family import FAMILIES, get_family
from .newton import build_polygon
from .radius import is_prime, known_radius, pcf_witness, radius_table, verify_pcf_witness
from .scalar import DEFAULT_PRECISION, PadicScalar
from .suites import DEFAULT_SEED, SUITES, run_suite
from .tree import classify_parameter, emit, explore, tree_stats

EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _threads(text):
    if text == "auto":
        return os.cpu_count() or 1
    return _positive(text)


def default_precision():
    env = os.environ.get("PADIC_PRECISION")
    if not env:
        return DEFAULT_PRECISION
    try:
        n = int(env)
    except ValueError:
        raise UsageError(f"PADIC_PRECISION must be a positive integer, got {env!r}") from None
    if n <= 0:
        raise UsageError(f"PADIC_PRECISION must be a positive integer, got {env!r}")
    return n


def build_parser():
    # accepted both before and after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=_positive, default=argparse.SUPPRESS,
                        help="digits of p-adic precision (default 128, or $PADIC_PRECISION)")
    common.add_argument("--max-iter", type=_positive, default=argparse.SUPPRESS,
                        help="orbit iteration budget (default 200)")
    parser = _Parser(prog="padyn", parents=[common],
                     description="p-adic polynomial dynamics: PCB certificates, "
                                 "Newton polygons, critical radii and parameter trees.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("classify", "decide whether f_t is post-critically bounded")
    p.add_argument("--family", default="cubic2", help=f"one of: {', '.join(sorted(FAMILIES))}")
    p.add_argument("--t", required=True, help="parameter literal: a/b or 'x + O(p^n)'")
    p.add_argument("--json", action="store_true", help="print the full result as JSON")

    p = add("explore", "color the parameter tree below a disk")
    p.add_argument("--family", default="cubic2")
    p.add_argument("--center", default="1", help="disk center (rational literal)")
    p.add_argument("--radius-exp", type=int, default=-1, help="integer s of the root disk D(center, p^s)")
    p.add_argument("--depth", type=_positive, default=10, help="deepest level n of disks D(c, p^-n)")
    p.add_argument("--format", choices=("ascii", "dot", "json"), default="ascii")
    p.add_argument("--threads", type=_threads, default=1, help="worker processes, or 'auto'")
    p.add_argument("--node-iter", type=_positive, default=None,
                   help="per-node iteration budget (default max(50, 2*level))")
    p.add_argument("--stats", action="store_true", help="print per-level color counts to stderr")

    p = add("radius", "known values and bounds for r(d,p)")
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--table", action="store_true")
    p.add_argument("--dmin", type=int, default=2)
    p.add_argument("--dmax", type=int, default=12)
    p.add_argument("--pmax", type=int, default=11)
    p.add_argument("--json", action="store_true")

    p = add("witness", "build and verify the post-critically finite witness")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("newton", "Newton polygon of a polynomial")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--coeffs", required=True, help="comma separated coefficients, low degree first")
    p.add_argument("--json", action="store_true")

    p = add("verify", "run a built-in verification suite")
    p.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}, all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


# -- commands -----------------------------------------------------------------------


def cmd_classify(args, precision, out):
    family = get_family(args.family)
    t = PadicScalar.parse(args.t, family.p)
    result = classify_parameter(family, t, max_iter=args.max_iter, precision=precision)
    if args.json:
        data = {"family": family.name, "t": str(t), **result.to_dict()}
        out.write(json.dumps(data, indent=1) + "\n")
    else:
        out.write(f"family {family.name}: {family.describe()}  (p = {family.p})\n")
        out.write(f"t = {t}\n")
        out.write(f"verdict: {result.verdict}\n")
        _, crits = family.instantiate(t)
        for c, r in zip(crits, result.classifications):
            out.write(f"critical point {c}: {r.summary()}\n")
            if r.certificate is not None:
                out.write(f"  certificate: {json.dumps(r.certificate.to_dict())}\n")
            out.write("  trace:\n")
            for n, v, z in r.trace:
                out.write(f"    {n:4d}  v={_val_str(v):>6}  {z}\n")
    return {"PCB": 0, "NotPCB": 1}.get(result.verdict, 2)


def _val_str(v):
    if v == float("inf"):
        return "inf"
    return str(v)


def cmd_explore(args, precision, out):
    family = get_family(args.family)
    center = PadicScalar.parse(args.center, family.p)
    if not center.is_exact:
        raise UsageError("the root center must be an exact rational")
    root = PadicBall(center, Fraction(args.radius_exp))
    tree = explore(family, root, args.depth, max_iter=args.node_iter, precision=precision,
                   threads=args.threads)
    out.write(emit(tree, args.format))
    if args.stats:
        stats = tree_stats(tree)
        for level, counts in stats["levels"].items():
            row = " ".join(f"{k}={v}" for k, v in counts.items())
            print(f"level {level}: {row}", file=sys.stderr)
        print(f"deepest certified level: {stats['deepest_certified']}", file=sys.stderr)
    return 0


def _check_prime(p):
    if p is None or not is_prime(p):
        raise UsageError(f"p must be prime, got {p}")


def cmd_radius(args, precision, out):
    if args.table:
        rows = radius_table(args.dmax, args.pmax, dmin=args.dmin)
        if args.json:
            out.write(json.dumps([r.to_dict() for r in rows], indent=1) + "\n")
            return 0
        out.write(f"{'d':>4} {'p':>4} {'kind':<8} {'value':<12} source\n")
        for r in rows:
            value = f"{r.value}" if r.kind != "Bounds" else f">={r.value}"
            out.write(f"{r.d:>4} {r.p:>4} {r.kind:<8} {value:<12} {r.label()}\n")
        return 0
    if args.d is None:
        raise UsageError("radius needs --d and --p, or --table")
    _check_prime(args.p)
    ans = known_radius(args.d, args.p)
    out.write((json.dumps(ans.to_dict()) if args.json else str(ans)) + "\n")
    return 0


def cmd_witness(args, precision, out):
    _check_prime(args.p)
    w = pcf_witness(args.d, args.p)
    check = verify_pcf_witness(args.d, args.p)
    if args.json:
        out.write(json.dumps({**w.to_dict(), "checks": check.to_dict()}, indent=1) + "\n")
    else:
        dec = w.decomposition
        out.write(f"d = {w.d}, p = {w.p}: k={dec.k} l={dec.l} a={dec.a} b={dec.b}\n")
        out.write(f"f(z) = {w.shape},  alpha^{w.d - 1} = {w.c},  v(alpha) = {w.v_alpha}\n")
        for name, ok in check.to_dict().items():
            out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
    return 0 if check.ok else 1


def cmd_newton(args, precision, out):
    _check_prime(args.p)
    coeffs = [PadicScalar.parse(part, args.p) for part in args.coeffs.split(",")]
    poly = build_polygon(coeffs, args.p)
    if args.json:
        out.write(poly.to_json() + "\n")
    else:
        out.write(f"vertices: {' '.join(f'({i},{v})' for i, v in poly.vertices)}\n")
        for m, x in poly.segments:
            out.write(f"segment slope {m}, length {x}: {x} root(s) of valuation {-m}\n")
        out.write(f"roots at 0: {poly.zero_root_count}\n")
    return 0


def cmd_verify(args, precision, out):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all")
    ok = True
    for name in names:
        out.write(f"suite {name}\n")
        for check in run_suite(name, args.seed):
            out.write(f"  {check.line()}\n")
            ok &= check.passed
    out.write("all checks passed\n" if ok else "some checks FAILED\n")
    return 0 if ok else 1


COMMANDS = {
    "classify": cmd_classify,
    "explore": cmd_explore,
    "radius": cmd_radius,
    "witness": cmd_witness,
    "newton": cmd_newton,
    "verify": cmd_verify,
}


def main(argv=None, out=None):
    if out is None:
        out = sys.stdout
        if hasattr(out, "reconfigure"):
            out.reconfigure(encoding="utf-8", line_buffering=True)
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "max_iter"):
        args.max_iter = 200
    try:
        precision = getattr(args, "precision", None) or default_precision()
        return COMMANDS[args.command](args, precision, out)
    except (UsageError, ParseError, DomainError) as exc:
        print(f"padyn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        print(f"padyn {args.command}: precision exhausted: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
