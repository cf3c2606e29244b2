"""Which reduced words occur as subwords of the relators' cyclic conjugates.

A length-``k`` word occurs in some cyclic conjugate of ``r`` exactly when it
is one of the ``|r|`` cyclic factors of ``r`` (``k <= |r|``).  Factors are
packed into base-``2m`` integer codes with numpy, one length class of
relators at a time, so coverage of ``10^6`` letters takes well under a
second.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .presentation import Presentation
from .words import Word, inverse


@dataclass(frozen=True)
class CoverageReport:
    m_star: int
    missing_witness: Word | None
    per_length_counts: dict[int, int] = field(default_factory=dict)


def reduced_count(m: int, k: int) -> int:
    return 2 * m * (2 * m - 1) ** (k - 1)


def _digit(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def word_code(w, m: int) -> int:
    code = 0
    for x in w:
        code = code * 2 * m + _digit(x)
    return code


class _Factors:
    """Incremental factor codes: the length-``k`` codes are the
    length-``(k-1)`` codes times ``2m`` plus one more digit."""

    def __init__(self, p: Presentation):
        self.base = 2 * p.m
        groups: dict[int, list] = {}
        for r in p.relators:
            groups.setdefault(len(r), []).extend((r, inverse(r)))
        lut = np.zeros(2 * p.m + 1, dtype=np.int64)
        for x in range(1, p.m + 1):
            lut[x], lut[-x] = _digit(x), _digit(-x)
        self.rows = {}
        for n, words in groups.items():
            arr = lut[np.asarray(words, dtype=np.int64)]
            self.rows[n] = np.concatenate([arr, arr], axis=1)
        self.k = 0
        self.codes = {n: np.zeros((len(a), n), dtype=np.int64) for n, a in self.rows.items()}

    def step(self) -> np.ndarray:
        """Advance to the next length; sorted distinct codes at that length."""
        self.k += 1
        k = self.k
        if k * np.log2(self.base) > 62:
            raise PreconditionError(f"factor length {k} too large to encode")
        parts = []
        for n in list(self.codes):
            if n < k:
                del self.codes[n]
                continue
            self.codes[n] = self.codes[n] * self.base + self.rows[n][:, k - 1 : k - 1 + n]
            parts.append(np.unique(self.codes[n]))
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate(parts))


def factor_codes(p: Presentation, k: int) -> np.ndarray:
    """Sorted distinct codes of the length-``k`` cyclic factors of every
    ``r^{+-1}`` with ``|r| >= k``."""
    if k < 1:
        raise PreconditionError("factor length must be >= 1")
    f = _Factors(p)
    for _ in range(k):
        codes = f.step()
    return codes


def _available(p: Presentation, k: int) -> int:
    return sum(2 * len(r) for r in p.relators if len(r) >= k)


def covers_all(p: Presentation, k: int) -> bool:
    """Every reduced word of length ``k`` occurs in some conjugate of some ``r^{+-1}``."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    need = reduced_count(p.m, k)
    if _available(p, k) < need:
        return False
    return len(factor_codes(p, k)) == need


def m_star(p: Presentation) -> CoverageReport:
    """Largest ``k`` with :func:`covers_all`, plus a shortlex-first missing word
    of length ``k + 1``."""
    counts: dict[int, int] = {}
    factors = _Factors(p)
    while True:
        codes = factors.step()
        k = factors.k
        counts[k] = len(codes)
        if len(codes) < reduced_count(p.m, k):
            break
    return CoverageReport(k - 1, _first_missing(p.m, k, codes), counts)


def _first_missing(m: int, k: int, codes: np.ndarray) -> Word:
    """Shortlex-first reduced word of length ``k`` whose code is absent.

    Depth-first in shortlex order, pruning prefixes whose whole code range
    is present, so the search stays small even when few words are missing.
    """
    base = 2 * m
    letters = [x for g in range(1, m + 1) for x in (g, -g)]

    def full(prefix_code: int, depth: int) -> bool:
        # number of present codes extending the prefix vs. reduced extensions
        span = base ** (k - depth)
        lo = np.searchsorted(codes, prefix_code * span)
        hi = np.searchsorted(codes, (prefix_code + 1) * span)
        return hi - lo == (2 * m - 1) ** (k - depth)

    def walk(prefix: list[int], code: int) -> Word | None:
        depth = len(prefix)
        if depth == k:
            return tuple(prefix)
        for x in letters:
            if prefix and x == -prefix[-1]:
                continue
            c = code * base + _digit(x)
            if full(c, depth + 1):
                continue
            found = walk(prefix + [x], c)
            if found is not None:
                return found
        return None

    return walk([], 0)
