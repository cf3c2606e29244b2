from __future__ import annotations

from dataclasses import dataclass

from .errors import WordError
from .words import Word, check_alphabet, format_word, is_cyclically_reduced, parse_word


@dataclass(frozen=True)
class Presentation:
    """``<a_1..a_m | relators>`` with every relator nonempty and cyclically reduced."""

    m: int
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise WordError("a presentation needs at least one generator")
        rels = tuple(tuple(r) for r in self.relators)
        object.__setattr__(self, "relators", rels)
        for i, r in enumerate(rels):
            if not r:
                raise WordError(f"relator {i} is empty")
            check_alphabet(r, self.m)
            if not is_cyclically_reduced(r):
                raise WordError(
                    f"relator {i} ({format_word(r, self.m)}) is not cyclically reduced"
                )

    @classmethod
    def from_strings(cls, m: int, relators: list[str] | tuple[str, ...]) -> "Presentation":
        return cls(m, tuple(parse_word(s) for s in relators))

    @property
    def lengths(self) -> list[int]:
        return [len(r) for r in self.relators]

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def __str__(self) -> str:
        rels = ", ".join(format_word(r, self.m) for r in self.relators)
        return f"<{self.m} generators | {rels}>"


def genus_presentation(g: int) -> Presentation:
    """Closed orientable surface group ``[a1,b1]...[ag,bg]`` on ``2g`` generators."""
    rel: list[int] = []
    for i in range(g):
        a, b = 2 * i + 1, 2 * i + 2
        rel += [a, b, -a, -b]
    return Presentation(2 * g, (tuple(rel),))
