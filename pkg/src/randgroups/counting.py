"""Exact counts of reduced and cyclically reduced words.

For a fixed first letter ``s``, ``p_n``, ``q_n`` and ``r_n`` count the
reduced words of length ``n + 2`` that end in ``s``, ``s^-1`` and a fixed
third letter respectively.  They obey

    p_n = p_{n-1} + (2m-2) r_{n-1}
    q_n = q_{n-1} + (2m-2) r_{n-1}
    r_n = p_{n-1} + q_{n-1} + (2m-3) r_{n-1}

with ``p_1 = 2m-1`` and ``q_1 = r_1 = 2m-2``.  Internally the tables are
extended down to ``n = -1`` (words of length 1), which is what the sampler
needs; the public API keeps ``n >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError


@dataclass(frozen=True)
class EndpointCounts:
    n: int
    p: int
    q: int
    r: int


@dataclass(frozen=True)
class OmissionBoundInput:
    m: int
    l: int
    g: int

    def __post_init__(self):
        if self.m < 2:
            raise PreconditionError("omission bound needs m >= 2")
        if not 4 * self.g < self.l:
            raise PreconditionError(f"omission bound needs g < l/4 (g={self.g}, l={self.l})")
        if not self.g > 4:
            raise PreconditionError(f"omission bound needs g > 4 (g={self.g})")


def _check_m(m: int) -> None:
    if m < 2:
        raise PreconditionError("counting needs m >= 2 generators")


@lru_cache(maxsize=64)
def _table(m: int, nmax: int) -> tuple[tuple[int, int, int], ...]:
    """``(p, q, r)`` for ``n = -1 .. nmax``; index ``n + 1``."""
    rows = [(1, 0, 0)]
    p, q, r = rows[0]
    for _ in range(nmax + 1):
        p, q, r = p + (2 * m - 2) * r, q + (2 * m - 2) * r, p + q + (2 * m - 3) * r
        rows.append((p, q, r))
    return tuple(rows)


def endpoint_counts(m: int, n: int) -> EndpointCounts:
    _check_m(m)
    if n < 1:
        raise PreconditionError("endpoint counts are defined for n >= 1")
    p, q, r = _table(m, n)[n + 1]
    return EndpointCounts(n, p, q, r)


def q_closed_form(m: int, n: int) -> int:
    """Closed form for ``q_n``; exact integer division."""
    k = 2 * m - 1
    top = k ** (n + 1) - (1 if n % 2 else k)
    assert top % (2 * m) == 0
    return top // (2 * m)


def count_cyclically_reduced(m: int, l: int) -> int:
    """``N_l = 2m p_{l-1}``."""
    _check_m(m)
    if l < 1:
        raise PreconditionError("length must be >= 1")
    return 2 * m * _table(m, l - 1)[l][0]


def count_cyclically_reduced_upto(m: int, l: int) -> int:
    _check_m(m)
    if l < 1:
        raise PreconditionError("length must be >= 1")
    return sum(cumulative_counts(m, l))


@lru_cache(maxsize=64)
def cumulative_counts(m: int, l: int) -> tuple[int, ...]:
    """``(N_1, ..., N_l)``."""
    table = _table(m, l - 1)
    return tuple(2 * m * table[k][0] for k in range(1, l + 1))


def omission_bound(m: int, l: int, g: int) -> float:
    """Upper bound on the fraction of cyclically reduced length-``l`` words
    omitting a fixed reduced word of length ``g``.

    Evaluated in log space so that neither term underflows prematurely.
    """
    OmissionBoundInput(m, l, g)
    k = 2 * m - 1
    growth = math.exp(math.log(2) - (l / 2 - 1) * math.log(k))
    decay = math.exp(math.log(l) - math.log(9 * g) - g * math.log(k))
    return min(1.0, math.exp(growth - decay))
