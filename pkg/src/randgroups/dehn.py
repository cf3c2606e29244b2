"""Dehn's algorithm for C'(1/6) presentations.

Words are handled internally as Python strings, one character per letter:
generator ``g`` is ``chr(2g)`` and its inverse ``chr(2g + 1)``, so inversion
of a letter is ``ord ^ 1``.  Slicing and dict lookups on short strings are
much faster than on tuples, which matters for the exhaustive ball checks.
"""

from __future__ import annotations

from functools import lru_cache

from .cancellation import is_c_prime
from .errors import PreconditionError
from .presentation import Presentation
from .words import Word, inverse, rotate


def encode(w) -> str:
    return "".join(chr(2 * x if x > 0 else 1 - 2 * x) for x in w)


def decode(s: str) -> Word:
    return tuple(o >> 1 if not o & 1 else -(o >> 1) for o in map(ord, s))


def inverse_str(s: str) -> str:
    return "".join(chr(ord(c) ^ 1) for c in reversed(s))


def free_reduce_str(s: str) -> str:
    out: list[str] = []
    for c in s:
        if out and ord(out[-1]) == ord(c) ^ 1:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def concat_reduced(a: str, b: str) -> str:
    """Free reduction of ``a b`` for already reduced ``a`` and ``b``."""
    k, la, lb = 0, len(a), len(b)
    while k < la and k < lb and ord(a[la - 1 - k]) ^ 1 == ord(b[k]):
        k += 1
    return a[: la - k] + b[k:]


class DehnRewriter:
    """Rewriting table for one presentation.

    For every cyclic conjugate ``u v`` of a relator or its inverse with
    ``|u| > |uv| / 2`` the table maps ``u`` to ``v^-1`` (strictly shorter).
    Entries are inserted in ``(relator_index, sign, shift)`` order with sign
    ``-1`` before ``+1`` and never overwritten, which fixes the tie-break.
    """

    def __init__(self, p: Presentation, check: bool = True):
        if check and not is_c_prime(p, "1/6").holds:
            raise PreconditionError("Dehn's algorithm needs a C'(1/6) presentation")
        self.presentation = p
        tables: dict[int, dict[str, str]] = {}
        for r in p.relators:
            n = len(r)
            for word in (inverse(r), r):
                for k in range(n):
                    c = encode(rotate(word, k))
                    for ell in range(n // 2 + 1, n + 1):
                        tables.setdefault(ell, {}).setdefault(c[:ell], inverse_str(c[ell:]))
        self.lengths = sorted(tables, reverse=True)
        self.tables = [(ell, tables[ell]) for ell in self.lengths]
        self.min_match = min(self.lengths) if self.lengths else 1
        self.max_len = max(self.lengths) if self.lengths else 0

    def reduce_str(self, s: str) -> str:
        """Leftmost-longest Dehn reduction of a freely reduced string."""
        start = 0
        while len(s) >= self.min_match:
            n = len(s)
            hit = None
            for pos in range(start, n - self.min_match + 1):
                for ell, table in self.tables:
                    if pos + ell <= n:
                        rep = table.get(s[pos : pos + ell])
                        if rep is not None:
                            hit = (pos, ell, rep)
                            break
                if hit:
                    break
            if hit is None:
                return s
            pos, ell, rep = hit
            s = concat_reduced(concat_reduced(s[:pos], rep), s[pos + ell :])
            # new matches must overlap the rewritten area, which free
            # reduction can only have pushed left by the cancelled amount
            cancelled = n - ell + len(rep) - len(s)
            start = max(0, pos - cancelled - self.max_len)
        return s

    def is_trivial_str(self, s: str) -> bool:
        if len(s) < self.min_match:
            return not s
        return not self.reduce_str(s)

    def dehn_reduce(self, w) -> Word:
        return decode(self.reduce_str(free_reduce_str(encode(w))))

    def is_trivial(self, w) -> bool:
        return self.is_trivial_str(free_reduce_str(encode(w)))


@lru_cache(maxsize=64)
def rewriter(p: Presentation) -> DehnRewriter:
    return DehnRewriter(p)


def dehn_reduce(w, p: Presentation) -> Word:
    return rewriter(p).dehn_reduce(w)


def is_trivial(w, p: Presentation) -> bool:
    return rewriter(p).is_trivial(w)
