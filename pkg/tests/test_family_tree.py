import json
import random
from fractions import Fraction

import pytest

from padyn import CUBIC2, NotACriticalPoint, PadicBall, PadicScalar, ParseError, PolynomialFamily, TreeNode
from padyn import ball_contains, ball_subset, classify_disk, classify_parameter, emit, explore, parse_tree_json
from padyn.family import get_family, parse_poly
from padyn.tree import BLACK, GRAY, UNKNOWN, WHITE, node_budget, tree_stats


def D(c, n):
    return PadicBall(PadicScalar(2, Fraction(c)), Fraction(-n))


@pytest.fixture(scope="module")
def figure1():
    return explore(CUBIC2, D(1, 1), 6)


@pytest.fixture(scope="module")
def figure2():
    return explore(CUBIC2, D(1, 3), 8)


# -- families -----------------------------------------------------------------------


def test_builtin_family():
    assert CUBIC2.degree == 3 and CUBIC2.p == 2
    assert CUBIC2.describe() == "z^3 + (-3/2*t) z^2"
    f, crits = CUBIC2.instantiate(5)
    assert f.coeffs[1] == Fraction(-15, 2) and crits == [0, 5]
    assert get_family("cubic2") is CUBIC2
    with pytest.raises(ParseError):
        get_family("quartic7")


def test_symbolic_critical_point_check():
    # z^3 - (3/2) t z^2 has critical points 0 and t, not 2t
    with pytest.raises(NotACriticalPoint):
        PolynomialFamily("bad", 2, ((0,), (0, Fraction(-3, 2))), ((0,), (0, 2)))
    with pytest.raises(NotACriticalPoint):
        PolynomialFamily("short", 2, ((0,), (0, Fraction(-3, 2))), ((0,),))
    # z^2 - 2 t z has the single critical point t
    quad = PolynomialFamily("quad", 3, ((0, -2),), ((0, 1),))
    assert quad.derivative_at((0, 1)) == (0,)


def test_parse_poly():
    assert parse_poly("0, -3/2") == (0, Fraction(-3, 2))
    with pytest.raises(ParseError):
        parse_poly("1, x")


def test_classify_parameter_examples():
    assert classify_parameter(CUBIC2, 1).verdict == "PCB"
    # |t| > 1 escapes at once: |f_t(t)| = 2|t|^3 exceeds 2^R
    r = classify_parameter(CUBIC2, Fraction(1, 4))
    assert r.verdict == "NotPCB" and r.classifications[1].certificate.iterate == 1
    assert classify_parameter(CUBIC2, Fraction(1, 2)).verdict == "NotPCB"
    # |t| <= 1/2 lies in the set
    for t in (2, 4, 6, Fraction(8, 3)):
        assert classify_parameter(CUBIC2, t).verdict == "PCB"


def test_classify_disk_examples():
    assert classify_disk(CUBIC2, D(17, 5)).color == WHITE
    assert classify_disk(CUBIC2, D(97, 7)).color == BLACK
    assert classify_disk(CUBIC2, D(0, 1)).color == BLACK
    res = classify_disk(CUBIC2, D(1, 3), max_iter=20)
    assert res.color == UNKNOWN
    assert res.certificate()["method"] == "taylor-model"


# -- exploration ----------------------------------------------------------------------


def spine(tree, top, bottom):
    return [tree.find("1", n) for n in range(top, bottom + 1)]


def test_figure1_left_spine_is_gray(figure1):
    nodes = spine(figure1, 1, 6)
    assert all(n is not None and n.color == GRAY for n in nodes)
    assert all("black" in n.certificate and "white" in n.certificate for n in nodes)


def test_figure1_certified_nodes(figure1):
    # mirror pairs t <-> -t: 5 and 3 mod 8, 25 and 7 mod 32
    assert figure1.find("5", 3).color == figure1.find("3", 3).color == WHITE
    assert figure1.find("25", 5).color == figure1.find("7", 5).color == BLACK
    assert figure1.find("17", 5).color == figure1.find("15", 5).color == WHITE


def test_figure2_subtree(figure2):
    assert figure2.depth == 3 and figure2.label == "1"
    assert figure2.find("17", 5).color == WHITE
    assert figure2.find("97", 7).color == BLACK
    assert all(n.color == GRAY for n in spine(figure2, 3, 8))


def test_root_outside_unit_disk_is_white():
    tree = explore(CUBIC2, PadicBall(PadicScalar(2, Fraction(1, 2)), Fraction(0)), 4)
    assert tree.color == WHITE and tree.children == []
    assert emit(tree, "ascii") == "1/2 W\n"


def test_partition(figure1):
    for _, node in figure1.walk():
        if not node.children:
            continue
        a, b = (c.disk for c in node.children)
        assert {c.depth for c in node.children} == {node.depth + 1}
        assert ball_subset(a, node.disk) and ball_subset(b, node.disk)
        assert not ball_subset(a, b) and not ball_subset(b, a)
        assert sorted(int(c.label) for c in node.children) == sorted(
            [int(node.label), int(node.label) + 2**node.depth])


def test_black_and_white_leaves_have_no_children(figure1):
    for _, node in figure1.walk():
        if node.color in (BLACK, WHITE) and node.certificate.get("method") != "children":
            assert node.children == []


def test_symmetry_of_parameters():
    rng = random.Random(21)
    for _ in range(40):
        t = Fraction(rng.randint(-3000, 3000), rng.choice([1, 1, 3, 5]))
        a = classify_parameter(CUBIC2, t).verdict
        b = classify_parameter(CUBIC2, -t).verdict
        assert a == b or "Unknown" in (a, b)


def test_symmetry_of_tree_colors(figure1):
    certified = {(n.label, n.depth): n.color for _, n in figure1.walk() if n.color in (BLACK, WHITE)}
    assert certified
    for _, node in figure1.walk():
        mirror = str((-int(node.label)) % 2**node.depth)
        m = figure1.find(mirror, node.depth)
        if m is None:
            continue
        if node.color in (BLACK, WHITE) and m.color in (BLACK, WHITE):
            assert node.color == m.color
        if node.color == BLACK:
            assert m.color != WHITE


def test_certified_nodes_are_sound(figure1):
    rng = random.Random(22)
    want = {BLACK: "PCB", WHITE: "NotPCB"}
    for _, node in figure1.walk():
        if node.color not in want:
            continue
        for _ in range(5):
            t = Fraction(int(node.label) + 2**node.depth * rng.randint(0, 10**4))
            assert ball_contains(node.disk, PadicScalar(2, t))
            assert classify_parameter(CUBIC2, t).verdict == want[node.color]


def test_gray_witnesses_are_genuine(figure2):
    for _, node in figure2.walk():
        if node.color != GRAY:
            continue
        for color, verdict in (("black", "PCB"), ("white", "NotPCB")):
            witness = node.certificate[color]
            if witness.startswith("D("):
                label, rest = witness[2:].split(", ")
                depth = int(rest.split("^-")[1].rstrip(")"))
                sub = figure2.find(label, depth)
                assert sub.color == color and ball_subset(sub.disk, node.disk)
            else:
                t = Fraction(witness)
                assert ball_contains(node.disk, PadicScalar(2, t))
                assert classify_parameter(CUBIC2, t).verdict == verdict


def test_monotone_refinement():
    shallow = explore(CUBIC2, D(1, 3), 5)
    deep = explore(CUBIC2, D(1, 3), 7)
    for _, node in shallow.walk():
        if node.color in (BLACK, WHITE, GRAY):
            assert deep.find(node.label, node.depth).color == node.color


def test_parallel_exploration_is_deterministic():
    one = explore(CUBIC2, D(1, 3), 6)
    two = explore(CUBIC2, D(1, 3), 6, threads=2)
    assert emit(one, "json") == emit(two, "json")


def test_tree_stats(figure1):
    stats = tree_stats(figure1)
    assert list(stats["levels"]) == [1, 2, 3, 4, 5, 6]
    assert stats["levels"][1] == {BLACK: 0, WHITE: 0, GRAY: 1, UNKNOWN: 0}
    assert stats["deepest_certified"] >= 5


def test_node_budget():
    assert node_budget(3) == 50 and node_budget(40) == 80


# -- emitters -----------------------------------------------------------------------


def small_tree():
    leaves = [TreeNode(2, str(lab), 3, c) for lab, c in ((1, GRAY), (5, BLACK), (3, WHITE), (7, UNKNOWN))]
    mid = [TreeNode(2, "1", 2, GRAY, children=leaves[:2]), TreeNode(2, "3", 2, GRAY, children=leaves[2:])]
    return TreeNode(2, "1", 1, GRAY, children=mid)


def test_dot_single_black_node():
    text = emit(TreeNode(2, "1", 0, BLACK), "dot")
    assert '"1" [style=filled, fillcolor=black]' in text
    assert text.startswith("digraph") and text.rstrip().endswith("}")


def test_dot_edges_and_styles():
    text = emit(small_tree(), "dot")
    assert '"1" -> "1@2";' in text and '"3@2" -> "7@3";' in text
    assert 'fillcolor=gray' in text and 'diagonals' in text


def test_ascii_tree():
    lines = emit(small_tree(), "ascii").splitlines()
    assert len(lines) == 7
    assert lines[0] == "1 G" and lines[1] == "  1 G" and lines[2] == "    1 G" and lines[-1] == "    7 ?"


def test_json_round_trip():
    tree = explore(CUBIC2, D(1, 3), 4)
    text = emit(tree, "json")
    assert parse_tree_json(text) == tree
    data = json.loads(text)
    assert set(data) >= {"label", "depth", "color", "children"}
    with pytest.raises(ParseError):
        parse_tree_json('{"label": "1"}')
    with pytest.raises(ParseError):
        parse_tree_json('{"label": "1", "depth": 0, "color": "teal", "p": 2}')
    with pytest.raises(ParseError):
        parse_tree_json("not json")


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(small_tree(), "svg")
