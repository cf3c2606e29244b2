"""Pieces and the metric small cancellation condition C'(lambda).

A piece is a common initial segment of two distinct cyclic conjugates of
relators or their inverses.  Conjugates are identified by index
``(relator_index, sign, shift)``: equal words at different indices are
still distinct, so a proper power ``w^k`` has the whole relator as a piece.

All conjugates are handled at once with a suffix ranking over the text made
of every doubled word ``c c`` for ``c in R u R^-1``.  A conjugate starting at
``shift`` is the length-``|c|`` prefix of the suffix at that offset, and the
longest piece starting there is its largest capped LCP against any other
conjugate start.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._suffix import SuffixRanks
from .errors import PreconditionError
from .presentation import Presentation
from .words import Word, inverse, rotate


class ConjugateIndex(NamedTuple):
    relator_index: int
    sign: int
    shift: int


class Witness(NamedTuple):
    piece: Word
    first: ConjugateIndex
    second: ConjugateIndex


@dataclass(frozen=True)
class PieceReport:
    max_piece_length_per_relator: tuple[int, ...]
    lambda_star: Fraction
    witness: Witness | None


@dataclass(frozen=True)
class SmallCancellationVerdict:
    lam: Fraction
    holds: bool


def as_fraction(value) -> Fraction:
    """Exact rational from a Fraction, int, ``"1/6"`` string or float.

    Floats go through their shortest repr, so ``0.12`` means ``12/100``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def conjugate(p: Presentation, idx: ConjugateIndex) -> Word:
    r = p.relators[idx.relator_index]
    return rotate(r if idx.sign > 0 else inverse(r), idx.shift)


def _encode(w: Word) -> list[int]:
    return [2 * x if x > 0 else 1 - 2 * x for x in w]


def piece_report(p: Presentation) -> PieceReport:
    if not p.relators:
        raise PreconditionError("piece analysis needs at least one relator")

    blocks = []
    for r in p.relators:
        for word in (r, inverse(r)):
            code = _encode(word)
            blocks.append(code + code)
    text = np.fromiter(
        (c for block in blocks for c in block), dtype=np.int64, count=sum(map(len, blocks))
    )
    rel_lengths = np.asarray([len(r) for r in p.relators], dtype=np.int64)
    block_len = np.repeat(rel_lengths, 2)
    block_off = np.concatenate(([0], np.cumsum(2 * block_len)[:-1]))
    # one row per conjugate, ordered by (relator, sign +1 then -1, shift)
    lengths = np.repeat(block_len, block_len)
    block_of = np.repeat(np.arange(len(block_len)), block_len)
    first_row = np.concatenate(([0], np.cumsum(block_len)[:-1]))
    shifts = np.arange(len(lengths)) - first_row[block_of]
    starts = block_off[block_of] + shifts
    owners = block_of // 2
    offset = len(text)

    def index_of(row: int) -> ConjugateIndex:
        b = int(block_of[row])
        return ConjugateIndex(b // 2, 1 if b % 2 == 0 else -1, int(shifts[row]))

    ranks = SuffixRanks(text, horizon=int(lengths.max()))
    start_id = np.full(offset, -1, dtype=np.int64)
    start_id[starts] = np.arange(len(starts))
    sorted_pos = ranks.order[start_id[ranks.order] >= 0]
    cid = start_id[sorted_pos]
    L = lengths[cid]
    h = ranks.lcp(sorted_pos[:-1], sorted_pos[1:])

    count = len(cid)
    left = np.zeros(count, dtype=np.int64)
    right = np.zeros(count, dtype=np.int64)
    left[1:] = np.minimum(np.minimum(h, L[:-1]), L[1:])
    right[:-1] = np.minimum(np.minimum(h, L[1:]), L[:-1])
    best = np.maximum(left, right)
    partner = np.where(left >= right, np.arange(count) - 1, np.arange(count) + 1)

    # A capped neighbour can hide a longer piece further away; rescan those.
    need = np.zeros(count, dtype=bool)
    need[1:] |= (h > L[:-1]) & (np.minimum(h, L[1:]) > best[1:])
    need[:-1] |= (h > L[1:]) & (np.minimum(h, L[:-1]) > best[:-1])
    hl, Ll = h.tolist(), L.tolist()
    for t in np.flatnonzero(need).tolist():
        b, part = int(best[t]), int(partner[t])
        cap = Ll[t]
        run = cap
        for s in range(t - 1, -1, -1):
            run = min(run, hl[s])
            if run <= b:
                break
            v = min(run, Ll[s])
            if v > b:
                b, part = v, s
        run = cap
        for s in range(t + 1, count):
            run = min(run, hl[s - 1])
            if run <= b:
                break
            v = min(run, Ll[s])
            if v > b:
                b, part = v, s
        best[t], partner[t] = b, part

    per_relator = np.zeros(len(p.relators), dtype=np.int64)
    np.maximum.at(per_relator, owners[cid], best)
    ratios = [Fraction(int(k), int(n)) for k, n in zip(per_relator, rel_lengths)]
    lambda_star = max(ratios)

    witness = None
    if lambda_star > 0:
        target = ratios.index(lambda_star)
        rows = np.flatnonzero((owners[cid] == target) & (best == per_relator[target]))
        t = int(rows[0])
        first = index_of(int(cid[t]))
        second = index_of(int(cid[int(partner[t])]))
        piece = conjugate(p, first)[: int(best[t])]
        witness = Witness(piece, first, second)
    return PieceReport(tuple(int(k) for k in per_relator), lambda_star, witness)


def is_c_prime(p: Presentation, lam, report: PieceReport | None = None) -> SmallCancellationVerdict:
    """C'(lam): every piece ``u`` in relator ``r`` has ``|u| < lam |r|``."""
    lam = as_fraction(lam)
    if not 0 < lam <= 1:
        raise PreconditionError("lambda must lie in (0, 1]")
    if report is None:
        report = piece_report(p)
    holds = all(
        k < lam * len(r) for k, r in zip(report.max_piece_length_per_relator, p.relators)
    )
    return SmallCancellationVerdict(lam, holds)
