"""Exact-uniform samplers for cyclically reduced words and random presentations.

Randomness: numpy's PCG64 generator seeded through ``SeedSequence``.  Both
are platform independent.  Every relator gets its own stream keyed by
``(seed, relator_index)``, so presentations are reproducible and relators
can be drawn in any order.

Word sampling is sequential: the first letter is uniform, and each later
letter is drawn with probability proportional to the exact number of
cyclically reduced completions.  Those completion counts take only two
adjacent values ``X_n`` and ``X_n - 1``, so a letter is proposed uniformly
among the ``2m - 1`` non-cancelling letters and, if it belongs to the
``X_n - 1`` class, rejected with probability ``1 / X_n``.  All arithmetic
is exact.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .counting import cumulative_counts
from .errors import InfeasibleConfigError, PreconditionError
from .presentation import Presentation
from .words import Word, alphabet

DEFAULT_RELATOR_CAP = 100_000
_SMALL = 1 << 62
_RAW = 1 << 64


@dataclass(frozen=True)
class FewRelatorConfig:
    m: int
    n: int
    l: int
    seed: int

    def __post_init__(self):
        if self.m < 2 or self.n < 1 or self.l < 1:
            raise PreconditionError("few-relator model needs m >= 2, n >= 1, l >= 1")


@dataclass(frozen=True)
class DensityConfig:
    m: int
    d: float
    l: int
    seed: int

    def __post_init__(self):
        if self.m < 2 or not 0 < self.d < 1 or self.l < 1:
            raise PreconditionError("density model needs m >= 2, 0 < d < 1, l >= 1")


def make_rng(*keys: int) -> np.random.Generator:
    """PCG64 stream for a tuple of non-negative integer keys."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(keys))))


def subseed(*keys: int) -> int:
    """Stable 64-bit seed derived from integer keys (SeedSequence hash)."""
    state = np.random.SeedSequence(list(keys)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def uniform_below(bound: int, rng: np.random.Generator) -> int:
    """Exact uniform integer in ``[0, bound)`` for arbitrarily large ``bound``."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound <= _SMALL:
        return int(rng.integers(bound))
    bits = bound.bit_length()
    words = (bits + 63) // 64
    mask = (1 << bits) - 1
    while True:
        raw = rng.bit_generator.random_raw(words)
        value = 0
        for chunk in raw.tolist():
            value = (value << 64) | chunk
        value &= mask
        if value < bound:
            return value


@lru_cache(maxsize=32)
def _completion_scale(m: int) -> tuple[tuple[int, ...], int]:
    """Exact ``X_n`` for every ``n`` with ``X_n < 2**62``, plus the first
    ``n`` at which ``X_n`` reaches that size."""
    k = 2 * m - 1
    values = []
    n = 0
    while True:
        x = (k ** (n + 2) + (1 if n % 2 else k)) // (2 * m)
        if x >= _SMALL:
            return tuple(values), n
        values.append(x)
        n += 1


def _completion_x(m: int, n: int) -> int:
    k = 2 * m - 1
    return (k ** (n + 2) + (1 if n % 2 else k)) // (2 * m)


def _reject_reciprocal(m: int, n: int, rng: np.random.Generator) -> bool:
    """Bernoulli(1 / X_n)."""
    small, cutoff = _completion_scale(m)
    if n < cutoff:
        return int(rng.integers(small[n])) == 0
    # 1/X = 2^-64 * (2^64 / X); the second factor is only needed on a hit.
    if int(rng.bit_generator.random_raw()) != 0:
        return False
    return uniform_below(_completion_x(m, n), rng) < _RAW


@lru_cache(maxsize=32)
def _successors(m: int) -> dict[int, tuple[int, ...]]:
    letters = alphabet(m)
    return {x: tuple(y for y in letters if y != -x) for x in letters}


def sample_cyclically_reduced(m: int, l: int, rng: np.random.Generator) -> Word:
    """Uniform sample from the cyclically reduced words of length ``l``."""
    if l < 1:
        raise PreconditionError("length must be >= 1")
    if m < 1:
        raise PreconditionError("need at least one generator")
    letters = alphabet(m)
    first = letters[int(rng.integers(2 * m))]
    if l == 1:
        return (first,)
    succ = _successors(m)
    branch = 2 * m - 1
    proposals = rng.integers(branch, size=l).tolist()
    cursor = 0
    word = [first]
    prev = first
    bad = -first
    for pos in range(2, l + 1):
        n = l - pos - 1  # letters left after this one, minus one
        while True:
            if cursor < len(proposals):
                j = proposals[cursor]
                cursor += 1
            else:
                j = int(rng.integers(branch))
            c = succ[prev][j]
            if n < 0:
                if c != bad:
                    break
                continue
            if c == first:
                break
            if c != bad and n % 2:
                break
            if not _reject_reciprocal(m, n, rng):
                break
        word.append(c)
        prev = c
    return tuple(word)


def sample_length(m: int, l: int, rng: np.random.Generator) -> int:
    """Length ``k <= l`` with probability ``N_k / N_{<=l}``."""
    counts = _prefix_sums(m, l)
    u = uniform_below(counts[-1], rng)
    return bisect.bisect_right(counts, u) + 1


@lru_cache(maxsize=64)
def _prefix_sums(m: int, l: int) -> list[int]:
    out, acc = [], 0
    for c in cumulative_counts(m, l):
        acc += c
        out.append(acc)
    return out


def sample_few_relator(cfg: FewRelatorConfig) -> Presentation:
    relators = []
    for i in range(cfg.n):
        rng = make_rng(cfg.seed, i)
        k = sample_length(cfg.m, cfg.l, rng)
        relators.append(sample_cyclically_reduced(cfg.m, k, rng))
    return Presentation(cfg.m, tuple(relators))


def density_relator_count(m: int, d: float, l: int, cap: int = DEFAULT_RELATOR_CAP) -> int:
    """``floor((2m-1)^(d l))``, at least 1, refusing anything above ``cap``."""
    if m < 2 or not 0 < d < 1 or l < 1:
        raise PreconditionError("density model needs m >= 2, 0 < d < 1, l >= 1")
    k = 2 * m - 1
    exponent = d * l
    if exponent * math.log(k) > math.log(cap) + 1e-9:
        raise InfeasibleConfigError(
            f"(2m-1)^(dl) = {k}^{exponent:g} relators exceeds the cap of {cap}"
        )
    nearest = round(exponent)
    if abs(exponent - nearest) < 1e-9:
        count = k**nearest
    else:
        count = math.floor(math.exp(exponent * math.log(k)))
        # guard the float floor against off-by-one at near-integers
        while count + 1 <= cap and math.log(count + 1) <= exponent * math.log(k):
            count += 1
        while count > 1 and math.log(count) > exponent * math.log(k):
            count -= 1
    count = max(1, count)
    if count > cap:
        raise InfeasibleConfigError(f"{count} relators exceeds the cap of {cap}")
    return count


def sample_density(cfg: DensityConfig, cap: int = DEFAULT_RELATOR_CAP) -> Presentation:
    count = density_relator_count(cfg.m, cfg.d, cfg.l, cap)
    relators = tuple(
        sample_cyclically_reduced(cfg.m, cfg.l, make_rng(cfg.seed, i)) for i in range(count)
    )
    return Presentation(cfg.m, relators)
