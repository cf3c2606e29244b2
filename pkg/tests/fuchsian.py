"""Faithful matrix representation of the genus-2 surface group.

The regular hyperbolic octagon with interior angles pi/4 tiles the disc,
and its side pairings generate a Fuchsian group isomorphic to the surface
group.  The pairing that glues side ``j`` onto side ``i`` is the rotation
taking side ``j`` to side ``i`` followed by the translation across side
``i``.  Sides carry the letters of ``abABcdCD``; the orientation of each
generator is chosen by search so that the relator evaluates to +-I.
Two words are equal in the group exactly when their matrices agree up to
sign.  Used as an independent word-problem oracle in the tests.
"""

from __future__ import annotations

import itertools

import mpmath

DPS = 80
RELATOR = (1, 2, -1, -2, 3, 4, -3, -4)
SIDES = len(RELATOR)
# entries of a length-L product grow like cot(pi/8)^L, so 80 digits keep
# products of a few dozen letters far from rounding trouble; the precision
# is set locally so other users of mpmath cannot change it
TOL = mpmath.mpf(10) ** -40


def translation(phi, t):
    """Moves the origin a distance ``t`` in direction ``phi`` (SU(1,1))."""
    c, s = mpmath.cosh(t / 2), mpmath.sinh(t / 2)
    e = mpmath.expjpi(phi / mpmath.pi)
    return mpmath.matrix([[c, e * s], [mpmath.conj(e) * s, c]])


def rotation(phi):
    h = mpmath.expjpi(phi / (2 * mpmath.pi))
    return mpmath.matrix([[h, 0], [0, mpmath.conj(h)]])


def _evaluate(gens: dict, word):
    with mpmath.workdps(DPS):
        out = mpmath.eye(2)
        for x in word:
            out = out * gens[x]
        return out


def _pm_identity_gap(m):
    with mpmath.workdps(DPS):
        eye = mpmath.eye(2)
        return min(mpmath.mnorm(m - eye, 1), mpmath.mnorm(m + eye, 1))


def side_pairing(j: int, i: int):
    # twice the inradius of the octagon: cosh(r) = cot(pi/8)
    t = 2 * mpmath.acosh(mpmath.cot(mpmath.pi / SIDES))
    theta = [2 * mpmath.pi * k / SIDES for k in range(SIDES)]
    return translation(theta[i], t) * rotation(theta[i] - theta[j])


@mpmath.workdps(DPS)
def genus2_generators() -> dict:
    base = {}
    for g in range(1, 5):
        base[g] = side_pairing(RELATOR.index(g), RELATOR.index(-g))
    for flips in itertools.product((False, True), repeat=4):
        gens = {}
        for g, flip in zip(range(1, 5), flips):
            gens[g] = base[g] ** -1 if flip else base[g]
            gens[-g] = gens[g] ** -1
        if _pm_identity_gap(_evaluate(gens, RELATOR)) < TOL:
            return gens
    raise RuntimeError("no orientation of the side pairings satisfies the relator")


class Genus2Oracle:
    def __init__(self):
        self.gens = genus2_generators()

    def matrix(self, word):
        return _evaluate(self.gens, word)

    @mpmath.workdps(DPS)
    def key(self, word, digits: int = 20, matrix=None) -> tuple:
        """Sign-normalised rounded entries; equal keys mean equal elements.
        Only meaningful for short words."""
        m = self.matrix(word) if matrix is None else matrix
        flat = [m[i, j] for i in range(2) for j in range(2)]
        # the (0,0) entry of an SU(1,1) matrix has modulus >= 1
        a = flat[0]
        if a.real < -TOL or (abs(a.real) <= TOL and a.imag < 0):
            flat = [-z for z in flat]
        parts = (v for z in flat for v in (z.real, z.imag))
        return tuple(mpmath.nstr(v if abs(v) > TOL else mpmath.mpf(0), digits) for v in parts)

    @mpmath.workdps(DPS)
    def keys(self, words) -> list[tuple]:
        """Keys for many words, reusing the matrix of each word's prefix."""
        cache = {(): mpmath.eye(2)}
        out = []
        for w in sorted(words, key=len):
            w = tuple(w)
            if w not in cache:
                prefix = cache.get(w[:-1])
                cache[w] = self.matrix(w) if prefix is None else prefix * self.gens[w[-1]]
        return [self.key(w, matrix=cache[tuple(w)]) for w in words]

    def is_trivial(self, word) -> bool:
        return _pm_identity_gap(self.matrix(word)) < TOL

    def equal(self, u, v) -> bool:
        return self.is_trivial(tuple(u) + tuple(-x for x in reversed(v)))
