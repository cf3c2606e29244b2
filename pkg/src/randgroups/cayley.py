"""Balls in Cayley graphs of C'(1/6) groups and polygon slimness.

The ball is grown breadth first.  A candidate ``v s`` is identified with an
existing vertex ``x`` only when ``(v s) x^-1`` is trivial by Dehn's
algorithm, and only vertices with the same image in the free part of the
abelianization (and at a compatible level) are tried.  Candidates are
produced in shortlex order, so the first word reaching a vertex is its
shortlex-least geodesic and serves as the vertex name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .cancellation import piece_report
from .dehn import encode, inverse_str, rewriter
from .errors import PreconditionError
from .presentation import Presentation
from .sampler import make_rng
from .words import Word, alphabet

MAX_BALL_WORDS = 10**6


@dataclass
class CayleyBall:
    presentation: Presentation
    radius: int
    words: list[Word]
    level: list[int]
    # neighbours[i][j]: vertex reached from i along alphabet(m)[j], or -1
    # when that vertex lies outside the ball
    neighbours: list[list[int]]
    index: dict[Word, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    def level_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.level:
            sizes[d] += 1
        return sizes

    def graph(self) -> csr_matrix:
        rows, cols = [], []
        for i, nbrs in enumerate(self.neighbours):
            for j in nbrs:
                if j >= 0:
                    rows.append(i)
                    cols.append(j)
        n = len(self.words)
        return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))


def abelian_projection(p: Presentation) -> np.ndarray:
    """Integer ``m x k`` matrix whose columns span the functionals killing
    every relator's exponent-sum vector; equal group elements have equal
    images."""
    import sympy

    rows = []
    for r in p.relators:
        v = [0] * p.m
        for x in r:
            v[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(v)
    basis = sympy.Matrix(rows).nullspace() if rows else [sympy.eye(p.m)[:, i] for i in range(p.m)]
    cols = []
    for b in basis:
        scale = sympy.ilcm(*[sympy.fraction(c)[1] for c in b]) if len(b) else 1
        cols.append([int(c * scale) for c in b])
    if not cols:
        return np.zeros((p.m, 0), dtype=np.int64)
    return np.asarray(cols, dtype=np.int64).T


def cayley_ball(p: Presentation, radius: int) -> CayleyBall:
    if radius < 0:
        raise PreconditionError("radius must be >= 0")
    if (2 * p.m - 1) ** radius > MAX_BALL_WORDS:
        raise PreconditionError(
            f"ball of radius {radius} over {p.m} generators exceeds the size guard"
        )
    rw = rewriter(p)  # raises unless C'(1/6)
    letters = alphabet(p.m)
    proj = abelian_projection(p)
    letter_key = {
        x: tuple(int(c) for c in (proj[abs(x) - 1] if x > 0 else -proj[abs(x) - 1]))
        for x in letters
    }

    words: list[Word] = [()]
    strs = [""]
    keys = [tuple([0] * proj.shape[1])]
    level = [0]
    index: dict[Word, int] = {(): 0}
    buckets: dict[tuple, list[int]] = {}
    neighbours: list[list[int]] = [[-1] * len(letters)]
    frontier = [0]

    def find(w: Word, key: tuple, last: int, d: int) -> int:
        hit = index.get(w)
        if hit is not None:
            return hit
        ws = encode(w)
        for lev in (d - 2, d - 1, d):
            for x in buckets.get((lev, key), ()):
                wx = words[x]
                if wx and wx[-1] == last:
                    continue  # x = x' last with x' canonical: would equal v
                s = strs[x]
                k = 0
                while k < len(ws) and k < len(s) and ws[k] == s[k]:
                    k += 1
                if rw.is_trivial_str(ws[k:] + inverse_str(s[k:])):
                    return x
        return -1

    for d in range(1, radius + 2):
        grow = d <= radius
        new = []
        for v in frontier:
            vw, vk = words[v], keys[v]
            for j, x in enumerate(letters):
                if neighbours[v][j] >= 0:
                    continue
                if vw and vw[-1] == -x:
                    u = index[vw[:-1]]
                else:
                    w = vw + (x,)
                    key = tuple(a + b for a, b in zip(vk, letter_key[x]))
                    u = find(w, key, x, d)
                    if u < 0:
                        if not grow:
                            continue
                        u = len(words)
                        words.append(w)
                        strs.append(encode(w))
                        keys.append(key)
                        level.append(d)
                        index[w] = u
                        buckets.setdefault((d, key), []).append(u)
                        neighbours.append([-1] * len(letters))
                        new.append(u)
                neighbours[v][j] = u
                neighbours[u][letters.index(-x)] = v
        frontier = new
    return CayleyBall(p, radius, words, level, neighbours, index)


def free_ball_size(m: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + 2 * m * ((2 * m - 1) ** radius - 1) // (2 * m - 2)


@dataclass(frozen=True)
class SlimnessResult:
    max_slimness: int
    per_sample: tuple[int, ...]
    n_gon_size: int
    radius: int


def _random_geodesic(graph: csr_matrix, src: int, dst: int, rng) -> list[int]:
    dist = shortest_path(graph, unweighted=True, indices=dst)
    if not np.isfinite(dist[src]):
        raise PreconditionError("polygon vertices are not connected inside the ball")
    path = [src]
    here = src
    indptr, indices = graph.indptr, graph.indices
    while here != dst:
        nbrs = indices[indptr[here] : indptr[here + 1]]
        closer = nbrs[dist[nbrs] == dist[here] - 1]
        here = int(closer[int(rng.integers(len(closer)))])
        path.append(here)
    return path


def polygon_slimness(graph: csr_matrix, sides: list[list[int]]) -> int:
    """Largest distance from a point on one side to the union of the others."""
    points = sorted({x for s in sides for x in s})
    pos = {x: i for i, x in enumerate(points)}
    dist = shortest_path(graph, unweighted=True, indices=points)
    worst = 0
    for i, side in enumerate(sides):
        others = sorted({x for j, s in enumerate(sides) if j != i for x in s})
        if not others:
            continue
        block = dist[[pos[x] for x in side]][:, others]
        worst = max(worst, int(block.min(axis=1).max()))
    return worst


def measure_slimness(
    p: Presentation, samples: int, n_gon_size: int, radius: int, rng, ball: CayleyBall | None = None
) -> SlimnessResult:
    """Sample geodesic ``n``-gons with corners in the ball of radius
    ``radius // 2`` and return the largest slimness seen.

    Corners within ``radius // 2`` guarantee that every geodesic side stays
    inside the ball of radius ``radius``, so side lengths are exact.
    Distances from side points to other sides are measured inside the ball,
    which can only overestimate them.
    """
    if n_gon_size < 2:
        raise PreconditionError("polygons need at least 2 sides")
    if samples < 1:
        raise PreconditionError("need at least one sample")
    if ball is None:
        ball = cayley_ball(p, radius)
    graph = ball.graph()
    corners_pool = [i for i, d in enumerate(ball.level) if d <= radius // 2]
    base = int(rng.integers(2**63))
    values = []
    for k in range(samples):
        local = make_rng(base, k)
        corners = [corners_pool[int(local.integers(len(corners_pool)))] for _ in range(n_gon_size)]
        sides = [
            _random_geodesic(graph, corners[i], corners[(i + 1) % n_gon_size], local)
            for i in range(n_gon_size)
        ]
        values.append(polygon_slimness(graph, sides))
    return SlimnessResult(max(values), tuple(values), n_gon_size, radius)


def slimness_trend(
    p: Presentation, sizes, samples: int, radius: int, seed: int
) -> dict:
    """Observed slimness for several polygon sizes and the least ``C >= 0``
    with ``Delta(n) <= M / (2 log floor(1/lambda - 4)) * log n + C``."""
    lam = piece_report(p).lambda_star
    if lam == 0:
        lam = type(lam)(1, 6)
    floor_term = math.floor(1 / lam - 4)
    if floor_term < 2:
        raise PreconditionError("slope needs lambda <= 1/6")
    M = max(p.lengths)
    slope = M / (2 * math.log(floor_term))
    ball = cayley_ball(p, radius)
    observed = {}
    for n in sizes:
        res = measure_slimness(p, samples, n, radius, make_rng(seed, n), ball=ball)
        observed[n] = res.max_slimness
    c = max(0.0, max(observed[n] - slope * math.log(n) for n in sizes))
    return {"slope": slope, "observed": observed, "fitted_C": c}
