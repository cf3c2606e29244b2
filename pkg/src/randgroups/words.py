"""Words over generators ``1..m`` and their inverses.

A letter is a nonzero int: ``+i`` is generator ``i`` and ``-i`` its inverse.
A word is a tuple of letters.  Tuples are immutable, hashable and cheap to
slice, so all operations here are plain functions returning new tuples.

Text form uses ``a..z`` for generators 1..26 and ``A..Z`` for their
inverses.  Beyond 26 generators the numeric form ``g27`` / ``G27`` is used;
both forms are accepted when parsing.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

from .errors import WordError

Letter = int
Word = tuple[int, ...]

_TOKEN = re.compile(r"([gG])(\d+)|([a-zA-Z])|(\s+)")


def parse_word(text: str) -> Word:
    """Parse ``"abAB"`` or ``"g1g2G1G2"`` into a word.  Whitespace is ignored."""
    letters = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise WordError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        numeric, index, alpha, _space = match.groups()
        if numeric is not None:
            gen = int(index)
            if gen < 1:
                raise WordError(f"generator index must be >= 1 at column {pos + 1}")
            letters.append(gen if numeric == "g" else -gen)
        elif alpha is not None:
            if alpha.islower():
                letters.append(ord(alpha) - ord("a") + 1)
            else:
                letters.append(-(ord(alpha) - ord("A") + 1))
        pos = match.end()
    return tuple(letters)


def format_word(w: Sequence[int], m: int | None = None) -> str:
    """Inverse of :func:`parse_word`.  Numeric form is used when ``m > 26``."""
    top = m if m is not None else max((abs(x) for x in w), default=0)
    if top <= 26:
        return "".join(
            chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w
        )
    return "".join(f"g{x}" if x > 0 else f"G{-x}" for x in w)


def alphabet(m: int) -> list[int]:
    """Letters in shortlex order: ``a < A < b < B < ...``."""
    out = []
    for i in range(1, m + 1):
        out.extend((i, -i))
    return out


def letter_rank(x: int) -> int:
    """Position of a letter in :func:`alphabet` order."""
    return 2 * (abs(x) - 1) + (x < 0)


def shortlex_key(w: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return len(w), tuple(letter_rank(x) for x in w)


def check_alphabet(w: Iterable[int], m: int) -> None:
    for x in w:
        if x == 0 or abs(x) > m:
            raise WordError(f"letter {x} outside the alphabet of {m} generators")


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def reduce(w: Iterable[int]) -> Word:
    """Free reduction: cancel adjacent ``x x^-1`` pairs until none remain."""
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def cyclic_reduce(w: Sequence[int]) -> Word:
    if not is_reduced(w):
        raise WordError("cyclic_reduce expects a freely reduced word")
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i : j + 1])


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def rotate(w: Sequence[int], shift: int) -> Word:
    return tuple(w[shift:]) + tuple(w[:shift])


def cyclic_conjugates(w: Sequence[int]) -> list[tuple[int, Word]]:
    """All rotations ``(shift, w[shift:] + w[:shift])`` of a cyclically reduced word."""
    if not w:
        raise WordError("cyclic_conjugates of the empty word")
    if not is_cyclically_reduced(w):
        raise WordError("cyclic_conjugates expects a cyclically reduced word")
    return [(k, rotate(w, k)) for k in range(len(w))]


def multiply(*words: Sequence[int]) -> Word:
    """Freely reduced product."""
    return reduce(x for w in words for x in w)


def reduced_words(m: int, length: int) -> Iterator[Word]:
    """All reduced words of the given length, in shortlex order."""
    letters = alphabet(m)

    def extend(prefix: Word, remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield prefix
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            yield from extend(prefix + (x,), remaining - 1)

    yield from extend((), length)
