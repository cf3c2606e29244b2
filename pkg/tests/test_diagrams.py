from __future__ import annotations

import copy
import json
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

import diagram_builders as db
from randgroups import Presentation, genus_presentation
from randgroups.dehn import is_trivial
from randgroups.diagrams import (
    boundary_word,
    check_planar_disc,
    d_ext,
    d_int,
    diagram_from_dict,
    diagram_to_dict,
    euler_identity,
    interior_face_bound,
    load_diagram,
    mirror_pairs,
    remove_degree_two,
    verify_diagram,
)
from randgroups.errors import DiagramError, PreconditionError
from randgroups.words import parse_word, reduce

DIAGRAMS = Path(__file__).resolve().parent.parent / "data" / "diagrams"
G2 = genus_presentation(2)
TORUS = Presentation.from_strings(2, ["abAB"])


def _pres(name):
    return TORUS if name.startswith("torus") else G2


def test_corpus_files_match_builders():
    corpus = db.corpus()
    assert sorted(p.name for p in DIAGRAMS.glob("*.json")) == sorted(corpus)
    for name, data in corpus.items():
        assert json.loads((DIAGRAMS / name).read_text()) == json.loads(json.dumps(data))


@pytest.mark.parametrize("name", sorted(n for n in db.corpus() if not n.startswith("corrupt")))
def test_valid_corpus(name):
    dg = load_diagram(DIAGRAMS / name)
    rep = verify_diagram(dg, _pres(name))
    assert rep.euler_identity_holds and rep.euler_rhs == 6
    g = nx.MultiGraph()
    g.add_nodes_from(dg.vertices)
    g.add_edges_from((e.tail, e.head) for e in dg.edges.values())
    assert nx.check_planarity(nx.Graph(g))[0]
    # the boundary label is trivial in the group; the torus group is Z^2
    w = boundary_word(dg)
    if _pres(name) is G2:
        assert is_trivial(w, G2)
    else:
        assert all(sum(1 if x == g else -1 if x == -g else 0 for x in w) == 0 for g in (1, 2))


def test_negative_control():
    dg = load_diagram(DIAGRAMS / "corrupt_incidence.json")
    with pytest.raises(DiagramError, match="closed walk"):
        verify_diagram(dg, G2)
    check = euler_identity(dg)
    assert not check.holds and check.rhs != 6


def test_mirror_pair_detection():
    mirror = load_diagram(DIAGRAMS / "genus2_mirror.json")
    rep = verify_diagram(mirror, G2)
    assert not rep.is_reduced
    assert rep.mirror_pairs == [("f0", "f1", "e0")]
    assert verify_diagram(load_diagram(DIAGRAMS / "genus2_two_faces.json"), G2).is_reduced
    # neighbouring grid squares are translates, not mirror images
    assert mirror_pairs(load_diagram(DIAGRAMS / "torus_2x2.json")) == []


def test_interior_face_counts():
    rep = verify_diagram(load_diagram(DIAGRAMS / "torus_3x3.json"), TORUS)
    assert rep.interior_face_count == 1
    assert rep.d_int is None  # the torus relator is not C'(1/6)
    rep = verify_diagram(load_diagram(DIAGRAMS / "torus_2x2.json"), TORUS)
    assert rep.interior_face_count == 0


def test_interior_face_limit_reported_with_sides():
    data = db.two_faces("abABcdCD", "BcdCDabA")
    data["sides"] = [7, 7]
    rep = verify_diagram(diagram_from_dict(data), G2)
    assert (rep.d_int, rep.d_ext) == (7, 4)
    assert rep.interior_face_limit == 0 and rep.interior_face_count == 0


def test_constants():
    assert d_int(Fraction(1, 6)) == 7 and d_ext(Fraction(1, 6)) == 4
    assert d_int(Fraction(1, 8)) == 9 and d_ext(Fraction(1, 8)) == 5
    assert interior_face_bound(3, Fraction(1, 6)) == 3
    assert interior_face_bound(2, Fraction(1, 6)) == 0
    assert interior_face_bound(10, Fraction(1, 12)) == 3
    for args in [(3, Fraction(1, 5)), (1, Fraction(1, 6)), (3, 0)]:
        with pytest.raises(PreconditionError):
            interior_face_bound(*args)


def test_degree_two_removal():
    dg = load_diagram(DIAGRAMS / "genus2_octagon.json")
    small = remove_degree_two(dg)
    assert len(small.vertices) == 1 and len(small.edges) == 1
    assert small.label(small.faces[0].boundary) in {parse_word("abABcdCD")} | {
        tuple(parse_word("abABcdCD")[k:] + parse_word("abABcdCD")[:k]) for k in range(8)
    }
    assert euler_identity(small).rhs == 6


def test_round_trip_dict():
    for name in db.corpus():
        dg = load_diagram(DIAGRAMS / name)
        assert diagram_from_dict(diagram_to_dict(dg)) == dg


def _mutate(fn):
    data = copy.deepcopy(db.two_faces("abABcdCD", "BcdCDabA"))
    fn(data)
    return data


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda d: d.pop("faces"), "malformed"),
        (lambda d: d["edges"][0].update(label="a1"), "label"),
        (lambda d: d["edges"][0].update(label=""), "empty label"),
        (lambda d: d["edges"].append(dict(d["edges"][0])), "duplicate edge"),
        (lambda d: d["faces"][0]["boundary"].append("e99"), "dangling"),
        (lambda d: d["edges"][0].update(to="nowhere"), "unknown endpoint"),
        (lambda d: d.update(base_point="nowhere"), "base point"),
        (lambda d: d["vertices"].append(d["vertices"][0]), "duplicate vertex"),
    ],
)
def test_malformed_descriptions(mutate, message):
    with pytest.raises(DiagramError, match=message):
        diagram_from_dict(_mutate(mutate))


def test_structural_failures():
    # a face used twice covers its darts twice
    data = _mutate(lambda d: d["faces"].append({"id": "f2", "boundary": d["faces"][0]["boundary"]}))
    with pytest.raises(DiagramError):
        check_planar_disc(diagram_from_dict(data))
    # relabelled edge: faces no longer read relators
    data = _mutate(lambda d: d["edges"][0].update(label="b"))
    with pytest.raises(DiagramError, match="not labelled"):
        verify_diagram(diagram_from_dict(data), G2)
    # two squares touching at a corner only: a pinched vertex
    with pytest.raises(DiagramError):
        check_planar_disc(diagram_from_dict(db.grid({(0, 0), (1, 1)})))
    # an annulus is not a disc
    ring = {(i, j) for i in range(3) for j in range(3)} - {(1, 1)}
    with pytest.raises(DiagramError):
        check_planar_disc(diagram_from_dict(db.grid(ring)))


@st.composite
def polyominoes(draw):
    cells = {(0, 0)}
    for _ in range(draw(st.integers(0, 10))):
        i, j = draw(st.sampled_from(sorted(cells)))
        di, dj = draw(st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1)]))
        cells.add((i + di, j + dj))
    return cells


def _is_disc(cells):
    """A polyomino is a closed disc iff it has no holes and no pinch points:
    every 2x2 window shows a pattern a disc can have locally."""
    xs = [i for i, _ in cells]
    ys = [j for _, j in cells]
    outside = set()
    box = {(i, j) for i in range(min(xs) - 1, max(xs) + 2) for j in range(min(ys) - 1, max(ys) + 2)}
    stack = [(min(xs) - 1, min(ys) - 1)]
    while stack:
        c = stack.pop()
        if c in outside or c in cells or c not in box:
            continue
        outside.add(c)
        stack += [(c[0] + 1, c[1]), (c[0] - 1, c[1]), (c[0], c[1] + 1), (c[0], c[1] - 1)]
    if len(outside) + len(cells) != len(box):
        return False
    for i in range(min(xs) - 1, max(xs) + 1):
        for j in range(min(ys) - 1, max(ys) + 1):
            a, b = (i, j) in cells, (i + 1, j + 1) in cells
            c, d = (i + 1, j) in cells, (i, j + 1) in cells
            if (a and b and not c and not d) or (c and d and not a and not b):
                return False
    return True


@given(polyominoes())
def test_polyominoes(cells):
    dg = diagram_from_dict(db.grid(cells))
    if _is_disc(cells):
        check_planar_disc(dg)
        rep = verify_diagram(dg, TORUS)
        assert rep.euler_rhs == 6
        # the torus group is Z^2, so the boundary must have zero exponent sums
        w = boundary_word(dg)
        assert all(sum(1 if x == g else -1 if x == -g else 0 for x in w) == 0 for g in (1, 2))
        assert len(reduce(w)) <= 4 * len(cells)
    else:
        with pytest.raises(DiagramError):
            check_planar_disc(dg)
