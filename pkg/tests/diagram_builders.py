"""Small builders for hand-made van Kampen diagrams used by the tests and
the bundled JSON corpus."""

from __future__ import annotations

from randgroups.words import parse_word


class Builder:
    def __init__(self):
        self.vertices: list[str] = []
        self.edges: list[dict] = []
        self.faces: list[dict] = []

    def vertex(self, name: str | None = None) -> str:
        name = name or f"v{len(self.vertices)}"
        self.vertices.append(name)
        return name

    def edge(self, tail: str, head: str, label: str) -> str:
        eid = f"e{len(self.edges)}"
        self.edges.append({"id": eid, "from": tail, "to": head, "label": label})
        return eid

    def path(self, start: str, end: str, word: str) -> list[str]:
        """Darts reading ``word`` letter by letter from ``start`` to ``end``."""
        letters = parse_word(word)
        here, darts = start, []
        for k, x in enumerate(letters):
            there = end if k == len(letters) - 1 else self.vertex()
            gen = "abcdefghijklmnopqrstuvwxyz"[abs(x) - 1]
            if x > 0:
                darts.append(self.edge(here, there, gen))
            else:
                darts.append("-" + self.edge(there, here, gen))
            here = there
        return darts

    def face(self, boundary: list[str]) -> None:
        self.faces.append({"id": f"f{len(self.faces)}", "boundary": list(boundary)})

    def exterior(self) -> list[str]:
        """Face darts whose reverse no face uses, chained into one walk."""
        used = {d for f in self.faces for d in f["boundary"]}
        rev = lambda d: d[1:] if d.startswith("-") else "-" + d
        free = [d for f in self.faces for d in f["boundary"] if rev(d) not in used]
        ends = {e["id"]: (e["from"], e["to"]) for e in self.edges}
        tail = lambda d: ends[d.lstrip("-")][1 if d.startswith("-") else 0]
        head = lambda d: ends[d.lstrip("-")][0 if d.startswith("-") else 1]
        by_tail = {tail(d): d for d in free}
        walk = [free[0]]
        while len(walk) < len(free):
            walk.append(by_tail[head(walk[-1])])
        return walk

    def build(self, base: str | None = None, sides=None) -> dict:
        ext = self.exterior() if self.faces else []
        out = {
            "vertices": self.vertices,
            "edges": self.edges,
            "faces": self.faces,
            "exterior": ext,
            "base_point": base or self.vertices[0],
        }
        if sides is not None:
            out["sides"] = sides
        return out


def single_face(relator: str, loop: bool = False) -> dict:
    b = Builder()
    v = b.vertex()
    if loop:
        b.face([b.edge(v, v, relator)])
    else:
        b.face(b.path(v, v, relator))
    return b.build()


def two_faces(first: str, second_ending_with_shared_inverse: str) -> dict:
    """Two faces glued along the first letter of ``first``; the second face
    is read counter-clockwise and ends with that edge reversed."""
    b = Builder()
    v0, v1 = b.vertex(), b.vertex()
    e = b.edge(v0, v1, first[0])
    b.face([e] + b.path(v1, v0, first[1:]))
    b.face(b.path(v0, v1, second_ending_with_shared_inverse[:-1]) + ["-" + e])
    return b.build()


def grid(cells: set[tuple[int, int]], sides=None) -> dict:
    """Unit squares ``abAB`` at the given cells of the plane."""
    b = Builder()
    names: dict[tuple[int, int], str] = {}

    def v(i, j):
        if (i, j) not in names:
            names[(i, j)] = b.vertex(f"p{i}_{j}")
        return names[(i, j)]

    horiz: dict[tuple[int, int], str] = {}
    vert: dict[tuple[int, int], str] = {}

    def h(i, j):
        if (i, j) not in horiz:
            horiz[(i, j)] = b.edge(v(i, j), v(i + 1, j), "a")
        return horiz[(i, j)]

    def u(i, j):
        if (i, j) not in vert:
            vert[(i, j)] = b.edge(v(i, j), v(i, j + 1), "b")
        return vert[(i, j)]

    for i, j in sorted(cells):
        b.face([h(i, j), u(i + 1, j), "-" + h(i, j + 1), "-" + u(i, j)])
    return b.build(base=names[min(cells)], sides=sides)


def rectangle(w: int, hgt: int) -> dict:
    return grid({(i, j) for i in range(w) for j in range(hgt)})


def corpus() -> dict[str, dict]:
    """The diagrams shipped in ``data/diagrams``, keyed by file name."""
    out = {
        "genus2_loop.json": single_face("abABcdCD", loop=True),
        "genus2_octagon.json": single_face("abABcdCD"),
        "genus2_two_faces.json": two_faces("abABcdCD", "BcdCDabA"),
        "genus2_mirror.json": two_faces("abABcdCD", "dcDCbaBA"),
        "torus_2x2.json": rectangle(2, 2),
        "torus_3x2.json": rectangle(3, 2),
        "torus_3x3.json": rectangle(3, 3),
        "torus_L.json": grid({(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)}),
    }
    bad = two_faces("abABcdCD", "BcdCDabA")
    bad["faces"][0]["boundary"].append(bad["faces"][0]["boundary"][1])
    out["corrupt_incidence.json"] = bad
    return out


if __name__ == "__main__":
    import json
    import sys
    from pathlib import Path

    target = Path(sys.argv[1] if len(sys.argv) > 1 else "data/diagrams")
    for name, d in corpus().items():
        (target / name).write_text(json.dumps(d, indent=1) + "\n")
