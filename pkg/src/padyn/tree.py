"""Rigorous coloring of the parameter tree of a one-parameter family.

Every disk ``D(c, p**-n)`` in Q_p splits into ``p`` disks of radius
``p**-(n+1)``, so a neighbourhood of a parameter is a ``p``-ary tree. A node
is colored

* ``black`` when every parameter in the disk gives a PCB map,
* ``white`` when none does,
* ``gray`` when the disk provably contains parameters of both kinds,
* ``unknown`` when the budget ran out before any of the above was shown.

Black and white come from whole-disk certificates (or from all children
being black, resp. white). Gray needs explicit evidence of both colors, taken
from certified descendants or, at the frontier, from certified sample points.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .ball import PadicBall
from .dynamics import DEFAULT_MAX_ITER, classify_orbit_ball, is_pcb
from .errors import ParseError
from .scalar import DEFAULT_PRECISION, PadicScalar

BLACK, WHITE, GRAY, UNKNOWN = "black", "white", "gray", "unknown"
COLORS = (BLACK, WHITE, GRAY, UNKNOWN)
# how many extra digits past the node radius the frontier samples reach
SAMPLE_OFFSETS = (0, 1, 2, 3)


def node_budget(depth):
    """Iteration budget for a node at the given level."""
    return max(50, 2 * depth)


def classify_parameter(family, t, max_iter=DEFAULT_MAX_ITER, precision=DEFAULT_PRECISION):
    """PCB / NotPCB / Unknown for the single parameter ``t`` (a :class:`PCBResult`)."""
    f, crits = family.instantiate(t)
    return is_pcb(f, crits, max_iter=max_iter, precision=precision)


@dataclass(frozen=True)
class DiskResult:
    color: str  # black | white | unknown
    classifications: tuple

    def certificate(self):
        orbits = []
        for c in self.classifications:
            entry = {"verdict": c.verdict}
            if c.certificate is not None:
                entry["certificate"] = c.certificate.to_dict()
            if c.reason is not None:
                entry["reason"] = c.reason
            orbits.append(entry)
        return {"method": "taylor-model", "critical_orbits": orbits}


def classify_disk(family, disk, max_iter=DEFAULT_MAX_ITER, precision=DEFAULT_PRECISION):
    """Black / White / Unknown for every parameter of ``disk`` at once."""
    fb, crits = family.instantiate_disk(disk, precision=precision)
    results = []
    for c in crits:
        r = classify_orbit_ball(fb, c, max_iter=max_iter, precision=precision)
        results.append(r)
        if r.escaped:
            return DiskResult(WHITE, tuple(results))
    if all(r.bounded for r in results):
        return DiskResult(BLACK, tuple(results))
    return DiskResult(UNKNOWN, tuple(results))


# -- tree nodes -------------------------------------------------------------------


@dataclass
class TreeNode:
    p: int
    label: str
    depth: int
    color: str = UNKNOWN
    certificate: dict | None = None
    children: list = field(default_factory=list)

    @property
    def disk(self):
        return PadicBall(PadicScalar(self.p, Fraction(self.label)), Fraction(-self.depth))

    def walk(self, level=0):
        yield level, self
        for c in self.children:
            yield from c.walk(level + 1)

    def find(self, label, depth):
        for _, node in self.walk():
            if node.depth == depth and node.label == label:
                return node
        return None

    def to_dict(self):
        out = {"label": self.label, "depth": self.depth, "color": self.color}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        out["children"] = [c.to_dict() for c in self.children]
        out["p"] = self.p
        return out

    @classmethod
    def from_dict(cls, data):
        try:
            color = data["color"]
            if color not in COLORS:
                raise ParseError(f"unknown color {color!r}")
            return cls(
                p=int(data["p"]),
                label=str(data["label"]),
                depth=int(data["depth"]),
                color=color,
                certificate=data.get("certificate"),
                children=[cls.from_dict(c) for c in data.get("children", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed tree node: {exc}") from None

    def __eq__(self, other):
        if not isinstance(other, TreeNode):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def disk_label(disk):
    """Smallest non-negative residue of the center (the canonical center)."""
    q = disk.center_q
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _disk_level(disk):
    s = disk.radius_exp
    if disk.is_point or Fraction(s).denominator != 1:
        raise ValueError("tree nodes need disks with an integer radius exponent")
    return -int(s)


# -- exploration ------------------------------------------------------------------


@dataclass(frozen=True)
class _Job:
    family: object
    center: Fraction
    depth: int
    frontier: bool
    max_iter: int | None
    precision: int


def _evaluate(job):
    """Certify one disk; at the frontier, fall back to sampling for gray evidence."""
    family = job.family
    p = family.p
    disk = PadicBall(PadicScalar(p, job.center), Fraction(-job.depth))
    budget = job.max_iter if job.max_iter is not None else node_budget(job.depth)
    res = classify_disk(family, disk, max_iter=budget, precision=job.precision)
    if res.color != UNKNOWN:
        return res.color, res.certificate(), None
    evidence = {}
    if job.frontier:
        points = [job.center] + [job.center + Fraction(p) ** (job.depth + e) for e in SAMPLE_OFFSETS]
        for point in points:
            verdict = classify_parameter(family, point, max_iter=budget, precision=job.precision).verdict
            key = BLACK if verdict == "PCB" else WHITE if verdict == "NotPCB" else None
            if key is not None and key not in evidence:
                evidence[key] = _frac(point)
            if len(evidence) == 2:
                break
    return UNKNOWN, None, evidence


def _frac(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def explore(family, root, max_depth, max_iter=None, precision=DEFAULT_PRECISION, threads=1):
    """Color the tree below ``root`` down to level ``max_depth`` (nodes ``D(c, p**-n)``, ``n <= max_depth``).

    Levels are processed one at a time; within a level nodes are handed to a
    process pool when ``threads > 1``. Results are collected in residue order,
    so the output does not depend on scheduling.
    """
    p = family.p
    top = _disk_level(root)
    node = TreeNode(p, disk_label(root), top)
    level = [(node, root)]
    info = {}
    pool = ProcessPoolExecutor(max_workers=threads) if threads and threads > 1 else None
    try:
        while level:
            jobs = [_Job(family, disk.center_q, n.depth, n.depth >= max_depth, max_iter, precision)
                    for n, disk in level]
            results = list(pool.map(_evaluate, jobs)) if pool else [_evaluate(j) for j in jobs]
            nxt = []
            for (n, disk), (color, cert, evidence) in zip(level, results):
                n.color = color
                n.certificate = cert
                info[id(n)] = evidence or {}
                if color == UNKNOWN and n.depth < max_depth:
                    for child in disk.children():
                        c = TreeNode(p, disk_label(child), n.depth + 1)
                        n.children.append(c)
                        nxt.append((c, child))
            level = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    _settle(node, info)
    return node


def _settle(node, info):
    """Bottom-up pass: inherit colors from children and decide gray nodes.

    Returns ``{color: witness}`` evidence found in the subtree.
    """
    if node.color in (BLACK, WHITE):
        return {node.color: f"D({node.label}, {node.p}^-{node.depth})"}
    evidence = dict(info.get(id(node), {}))
    child_colors = []
    for c in node.children:
        for k, v in _settle(c, info).items():
            evidence.setdefault(k, v)
        child_colors.append(c.color)
    if child_colors and all(x == BLACK for x in child_colors):
        node.color = BLACK
        node.certificate = {"method": "children"}
    elif child_colors and all(x == WHITE for x in child_colors):
        node.color = WHITE
        node.certificate = {"method": "children"}
    elif BLACK in evidence and WHITE in evidence:
        node.color = GRAY
        node.certificate = {"black": evidence[BLACK], "white": evidence[WHITE]}
    else:
        node.color = UNKNOWN
        node.certificate = None
    if node.color in (BLACK, WHITE):
        return {node.color: f"D({node.label}, {node.p}^-{node.depth})"}
    return evidence


def tree_stats(tree):
    """Per-level color counts and the deepest level holding a certified node."""
    levels = {}
    deepest = None
    for _, node in tree.walk():
        counts = levels.setdefault(node.depth, {c: 0 for c in COLORS})
        counts[node.color] += 1
        if node.color in (BLACK, WHITE) and (deepest is None or node.depth > deepest):
            deepest = node.depth
    return {"levels": dict(sorted(levels.items())), "deepest_certified": deepest}


# -- emitters -----------------------------------------------------------------------

_LETTERS = {BLACK: "B", WHITE: "W", GRAY: "G", UNKNOWN: "?"}
_DOT_STYLE = {
    BLACK: "style=filled, fillcolor=black",
    WHITE: "style=filled, fillcolor=white",
    GRAY: "style=filled, fillcolor=gray",
    UNKNOWN: 'style="filled,diagonals", fillcolor=white',
}


def emit(tree, fmt="ascii"):
    if fmt == "ascii":
        return emit_ascii(tree)
    if fmt == "dot":
        return emit_dot(tree)
    if fmt == "json":
        return emit_json(tree)
    raise ValueError(f"unknown format {fmt!r}")


def emit_ascii(tree):
    lines = [f"{'  ' * level}{node.label} {_LETTERS[node.color]}" for level, node in tree.walk()]
    return "\n".join(lines) + "\n"


def _dot_id(node, is_root):
    return node.label if is_root else f"{node.label}@{node.depth}"


def emit_dot(tree):
    lines = ["digraph parameter_tree {", "  node [shape=circle];"]

    def visit(node, is_root):
        nid = _dot_id(node, is_root)
        extra = [] if is_root else [f'label="{node.label}"']
        if node.color == BLACK:
            extra.append("fontcolor=white")
        tail = f" [{', '.join(extra)}]" if extra else ""
        lines.append(f'  "{nid}" [{_DOT_STYLE[node.color]}]{tail};')
        for c in node.children:
            visit(c, False)
            lines.append(f'  "{nid}" -> "{_dot_id(c, False)}";')

    visit(tree, True)
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(tree):
    return json.dumps(tree.to_dict(), indent=1) + "\n"


def parse_tree_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid tree JSON: {exc}") from None
    return TreeNode.from_dict(data)
