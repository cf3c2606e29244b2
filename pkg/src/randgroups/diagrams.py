"""Van Kampen diagrams as declarative planar maps, and their verification.

JSON schema::

    {
      "vertices": ["v0", "v1", ...],
      "edges": [{"id": "e0", "from": "v0", "to": "v1", "label": "a"}, ...],
      "faces": [{"id": "f0", "boundary": ["e0", "-e3", ...]}, ...],
      "exterior": ["e0", "e1", ...],
      "base_point": "v0",
      "sides": [3, 4, 2]                      (optional)
    }

A directed edge is written ``"e"`` (traversed from ``from`` to ``to``,
reading ``label``) or ``"-e"`` (the reverse, reading ``label^-1``).  Face
boundaries and the exterior boundary are closed walks, all read
counter-clockwise.  ``sides`` optionally lists the lengths of the sides of
the polygon the boundary is meant to be; only its length is used here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .cancellation import as_fraction, is_c_prime
from .errors import DiagramError, PreconditionError, WordError
from .presentation import Presentation
from .words import Word, inverse, parse_word, rotate


class Edge(NamedTuple):
    id: str
    tail: str
    head: str
    label: Word


class Dart(NamedTuple):
    edge: str
    sign: int

    def reverse(self) -> "Dart":
        return Dart(self.edge, -self.sign)

    def __str__(self) -> str:
        return self.edge if self.sign > 0 else "-" + self.edge


class Face(NamedTuple):
    id: str
    boundary: tuple[Dart, ...]


@dataclass(frozen=True)
class VanKampenDiagram:
    vertices: tuple[str, ...]
    edges: dict[str, Edge]
    faces: tuple[Face, ...]
    exterior: tuple[Dart, ...]
    base_point: str
    sides: tuple[int, ...] | None = None

    def tail(self, d: Dart) -> str:
        e = self.edges[d.edge]
        return e.tail if d.sign > 0 else e.head

    def head(self, d: Dart) -> str:
        e = self.edges[d.edge]
        return e.head if d.sign > 0 else e.tail

    def label(self, darts) -> Word:
        out: list[int] = []
        for d in darts:
            w = self.edges[d.edge].label
            out.extend(w if d.sign > 0 else inverse(w))
        return tuple(out)

    def degree(self) -> dict[str, int]:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges.values():
            deg[e.tail] += 1
            deg[e.head] += 1
        return deg

    def exterior_edges(self) -> set[str]:
        return {d.edge for d in self.exterior}


@dataclass(frozen=True)
class DiagramCheckReport:
    is_reduced: bool
    euler_identity_holds: bool
    interior_face_count: int
    interior_face_limit: int | None
    d_int: int | None
    d_ext: int | None
    euler_rhs: int = 0
    mirror_pairs: list[tuple[str, str, str]] = field(default_factory=list)


@dataclass(frozen=True)
class EulerCheck:
    lhs: int
    rhs: int
    holds: bool


def _dart(text: str) -> Dart:
    text = str(text)
    return Dart(text[1:], -1) if text.startswith("-") else Dart(text, 1)


def diagram_from_dict(data: dict) -> VanKampenDiagram:
    try:
        vertices = tuple(str(v) for v in data["vertices"])
        edges = {}
        for e in data["edges"]:
            eid = str(e["id"])
            if eid in edges:
                raise DiagramError(f"duplicate edge id {eid!r}")
            label = parse_word(e["label"])
            if not label:
                raise DiagramError(f"edge {eid!r} has an empty label")
            edges[eid] = Edge(eid, str(e["from"]), str(e["to"]), label)
        faces = tuple(
            Face(str(f["id"]), tuple(_dart(x) for x in f["boundary"])) for f in data["faces"]
        )
        exterior = tuple(_dart(x) for x in data["exterior"])
        base = str(data["base_point"])
        sides = tuple(int(s) for s in data["sides"]) if data.get("sides") is not None else None
    except (KeyError, TypeError) as exc:
        raise DiagramError(f"malformed diagram description: {exc!r}") from exc
    except WordError as exc:
        raise DiagramError(f"bad edge label: {exc}") from exc
    if len(set(vertices)) != len(vertices):
        raise DiagramError("duplicate vertex ids")
    known = set(vertices)
    for e in edges.values():
        if e.tail not in known or e.head not in known:
            raise DiagramError(f"edge {e.id!r} has an unknown endpoint")
    for walk in [f.boundary for f in faces] + [exterior]:
        for d in walk:
            if d.edge not in edges:
                raise DiagramError(f"dangling edge reference {str(d)!r}")
    if base not in known:
        raise DiagramError(f"base point {base!r} is not a vertex")
    return VanKampenDiagram(vertices, edges, faces, exterior, base, sides)


def load_diagram(path) -> VanKampenDiagram:
    with open(Path(path), encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid JSON: {exc}") from exc
    return diagram_from_dict(data)


def diagram_to_dict(dg: VanKampenDiagram) -> dict:
    from .words import format_word

    out = {
        "vertices": list(dg.vertices),
        "edges": [
            {"id": e.id, "from": e.tail, "to": e.head, "label": format_word(e.label)}
            for e in dg.edges.values()
        ],
        "faces": [{"id": f.id, "boundary": [str(d) for d in f.boundary]} for f in dg.faces],
        "exterior": [str(d) for d in dg.exterior],
        "base_point": dg.base_point,
    }
    if dg.sides is not None:
        out["sides"] = list(dg.sides)
    return out


def _check_closed(dg: VanKampenDiagram, walk, name: str) -> None:
    for i, d in enumerate(walk):
        nxt = walk[(i + 1) % len(walk)]
        if dg.head(d) != dg.tail(nxt):
            raise DiagramError(f"{name} is not a closed walk at {d} -> {nxt}")


def _connected(dg: VanKampenDiagram) -> bool:
    if not dg.vertices:
        return False
    adj: dict[str, set[str]] = {v: set() for v in dg.vertices}
    for e in dg.edges.values():
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    seen = {dg.vertices[0]}
    stack = [dg.vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(dg.vertices)


def check_planar_disc(dg: VanKampenDiagram) -> None:
    """Raise :class:`DiagramError` unless faces plus the outer face form a
    cellular map of the sphere, i.e. the diagram is a planar disc."""
    for f in dg.faces:
        if not f.boundary:
            raise DiagramError(f"face {f.id!r} has an empty boundary")
        _check_closed(dg, f.boundary, f"face {f.id!r}")
    if dg.exterior:
        _check_closed(dg, dg.exterior, "exterior boundary")
    elif dg.edges or dg.faces:
        raise DiagramError("empty exterior boundary on a nonempty diagram")
    if not _connected(dg):
        raise DiagramError("diagram is not connected")

    # every directed edge used exactly once by the faces and the outer face
    walks = [f.boundary for f in dg.faces]
    walks.append(tuple(d.reverse() for d in reversed(dg.exterior)))
    used: dict[Dart, int] = {}
    for walk in walks:
        for d in walk:
            used[d] = used.get(d, 0) + 1
    for e in dg.edges:
        for sign in (1, -1):
            c = used.get(Dart(e, sign), 0)
            if c != 1:
                raise DiagramError(f"directed edge {Dart(e, sign)} is used {c} times, expected 1")

    # rotation around each vertex must be a single cycle (no pinched surface)
    nxt: dict[Dart, Dart] = {}
    for walk in walks:
        for i, d in enumerate(walk):
            nxt[d.reverse()] = walk[(i + 1) % len(walk)]
    seen: set[Dart] = set()
    for v in dg.vertices:
        out = [Dart(e.id, 1) for e in dg.edges.values() if e.tail == v]
        out += [Dart(e.id, -1) for e in dg.edges.values() if e.head == v]
        if not out:
            if len(dg.vertices) > 1:
                raise DiagramError(f"isolated vertex {v!r}")
            continue
        orbit, d = 0, out[0]
        while True:
            seen.add(d)
            orbit += 1
            d = nxt[d]
            if d == out[0]:
                break
        if orbit != len(out):
            raise DiagramError(f"vertex {v!r} is a singular point of the surface")

    chi = len(dg.vertices) - len(dg.edges) + len(dg.faces) + 1
    if chi != 2:
        raise DiagramError(f"faces do not form a disc (Euler characteristic {chi - 1})")
    if dg.exterior and dg.base_point not in {dg.tail(d) for d in dg.exterior}:
        raise DiagramError("base point is not on the boundary")


def boundary_word(dg: VanKampenDiagram) -> Word:
    """Label of the exterior boundary read counter-clockwise from the base point."""
    if not dg.exterior:
        return ()
    starts = [i for i, d in enumerate(dg.exterior) if dg.tail(d) == dg.base_point]
    return dg.label(rotate(dg.exterior, starts[0]))


def _relator_conjugates(p: Presentation) -> set[Word]:
    out = set()
    for r in p.relators:
        for w in (r, inverse(r)):
            for k in range(len(w)):
                out.add(rotate(w, k))
    return out


def check_face_labels(dg: VanKampenDiagram, p: Presentation) -> None:
    conj = _relator_conjugates(p)
    for f in dg.faces:
        w = dg.label(f.boundary)
        if w not in conj:
            raise DiagramError(f"face {f.id!r} is not labelled by a relator or its inverse")


def mirror_pairs(dg: VanKampenDiagram) -> list[tuple[str, str, str]]:
    """``(face1, face2, edge)`` for distinct faces meeting along ``edge`` whose
    boundary labels, read from that edge in opposite directions, agree."""
    where: dict[Dart, tuple[int, int]] = {}
    for fi, f in enumerate(dg.faces):
        for k, d in enumerate(f.boundary):
            where[d] = (fi, k)
    found = []
    for eid in dg.edges:
        a, b = where.get(Dart(eid, 1)), where.get(Dart(eid, -1))
        if a is None or b is None or a[0] == b[0]:
            continue
        f1, f2 = dg.faces[a[0]], dg.faces[b[0]]
        # f1 read from the edge; f2 read back towards the same starting vertex
        w1 = dg.label(rotate(f1.boundary, a[1]))
        w2 = dg.label(rotate(f2.boundary, (b[1] + 1) % len(f2.boundary)))
        if w1 == inverse(w2):
            found.append((f1.id, f2.id, eid))
    return found


def remove_degree_two(dg: VanKampenDiagram) -> VanKampenDiagram:
    """Merge the two edges at each degree-2 vertex into one edge labelled by
    the concatenated word.  Vertices whose walks do not pass straight
    through are left alone."""
    while True:
        merged = _merge_one(dg)
        if merged is None:
            return dg
        dg = merged


def _merge_one(dg: VanKampenDiagram) -> VanKampenDiagram | None:
    deg = dg.degree()
    ends: dict[str, list[Dart]] = {v: [] for v in dg.vertices}
    for e in dg.edges.values():
        ends[e.head].append(Dart(e.id, 1))  # darts arriving at the vertex
        ends[e.tail].append(Dart(e.id, -1))
    for v in dg.vertices:
        if deg[v] != 2:
            continue
        d_in, d_other = ends[v]
        if d_in.edge == d_other.edge:
            continue  # a loop
        d_out = d_other.reverse()  # leaves v along the second edge
        new_id = f"{d_in.edge}+{d_out.edge}"
        new = Edge(new_id, dg.tail(d_in), dg.head(d_out), dg.label((d_in, d_out)))
        walks = [f.boundary for f in dg.faces] + [dg.exterior]
        rewritten = []
        ok = True
        for walk in walks:
            out = _splice(walk, d_in, d_out, Dart(new_id, 1))
            if out is None:
                ok = False
                break
            rewritten.append(out)
        if not ok:
            continue
        edges = {k: e for k, e in dg.edges.items() if k not in (d_in.edge, d_out.edge)}
        edges[new_id] = new
        base = dg.base_point
        if base == v:
            base = new.tail
        faces = tuple(Face(f.id, w) for f, w in zip(dg.faces, rewritten[:-1]))
        exterior = rewritten[-1]
        vertices = tuple(x for x in dg.vertices if x != v)
        return VanKampenDiagram(vertices, edges, faces, exterior, base, dg.sides)
    return None


def _splice(walk, a: Dart, b: Dart, new: Dart):
    """Replace consecutive ``a b`` by ``new`` and ``b^-1 a^-1`` by ``new^-1``."""
    n = len(walk)
    if n == 0:
        return walk
    edges = {a.edge, b.edge}
    if not any(d.edge in edges for d in walk):
        return walk
    # rotate so that no pair straddles the end of the list
    start = next((i for i, d in enumerate(walk) if d.edge not in edges), None)
    if start is None:
        if n == 2 and walk[0] == a and walk[1] == b:
            return (new,)
        if n == 2 and walk[0] == b.reverse() and walk[1] == a.reverse():
            return (new.reverse(),)
        return None
    walk = rotate(walk, start)
    out, i = [], 0
    while i < n:
        d = walk[i]
        if d.edge not in edges:
            out.append(d)
            i += 1
            continue
        pair = walk[i : i + 2]
        if pair == (a, b):
            out.append(new)
        elif pair == (b.reverse(), a.reverse()):
            out.append(new.reverse())
        else:
            return None
        i += 2
    return tuple(out)


def euler_identity(dg: VanKampenDiagram) -> EulerCheck:
    """Evaluate ``2 sum_v (3 - d(v)) + sum_B (6 - 2 e(B) - i(B))`` after
    removing degree-2 vertices; the identity holds when this equals 6.

    The face terms are computed from the declared face boundaries, so
    inconsistent incidence data shows up as a failed identity.
    """
    if not _connected(dg):
        raise DiagramError("diagram is not connected")
    if len(dg.vertices) - len(dg.edges) + len(dg.faces) != 1:
        raise DiagramError("diagram is not a disc (V - E + F != 1)")
    if dg.exterior:
        tails = [dg.tail(d) for d in dg.exterior]
        if len(set(tails)) != len(tails):
            raise DiagramError("exterior boundary is not a simple closed curve")
    dg = remove_degree_two(dg)
    deg = dg.degree()
    outer = dg.exterior_edges()
    rhs = 2 * sum(3 - deg[v] for v in dg.vertices)
    for f in dg.faces:
        e = sum(1 for d in f.boundary if d.edge in outer)
        i = len(f.boundary) - e
        rhs += 6 - 2 * e - i
    return EulerCheck(6, rhs, rhs == 6)


def d_int(lam) -> int:
    lam = as_fraction(lam)
    return math.floor(1 / lam + 1)


def d_ext(lam) -> int:
    lam = as_fraction(lam)
    return math.floor(1 / (2 * lam) + 1)


def interior_face_bound(n: int, lam) -> int:
    """Most interior faces a reduced diagram for a geodesic ``n``-gon can have."""
    lam = as_fraction(lam)
    if not 0 < lam <= Fraction(1, 6):
        raise PreconditionError("interior face bound needs 0 < lambda <= 1/6")
    if n < 2:
        raise PreconditionError("polygons have at least 2 sides")
    return (3 * n - 6) // (d_int(lam) - 6)


def verify_diagram(dg: VanKampenDiagram, p: Presentation, lam=Fraction(1, 6)) -> DiagramCheckReport:
    """Validate the planar map and its face labels, then report reducedness,
    the Euler-type identity and the interior face count.

    ``d_int``, ``d_ext`` and the interior face bound are filled in when the
    presentation satisfies C'(lam) with ``lam <= 1/6`` (the bound also needs
    ``sides``).
    """
    check_planar_disc(dg)
    check_face_labels(dg, p)
    pairs = mirror_pairs(dg)
    euler = euler_identity(dg) if dg.faces or dg.edges else EulerCheck(6, 6, True)
    outer = dg.exterior_edges()
    interior = sum(1 for f in dg.faces if not any(d.edge in outer for d in f.boundary))
    lam = as_fraction(lam)
    di = de = bound = None
    if lam <= Fraction(1, 6) and is_c_prime(p, lam).holds:
        di, de = d_int(lam), d_ext(lam)
        if dg.sides is not None and len(dg.sides) >= 2:
            bound = interior_face_bound(len(dg.sides), lam)
    return DiagramCheckReport(not pairs, euler.holds, interior, bound, di, de, euler.rhs, pairs)
