"""Presentation files.

Line oriented, UTF-8, LF endings::

    # genus 2 surface group
    gens 4
    rel abABcdCD

``#`` starts a comment that runs to the end of the line.  The ``gens``
header comes first; each ``rel`` line holds one cyclically reduced relator
in the usual text form (``a..z``/``A..Z`` or ``g27``/``G27``).
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import PresentationParseError, WordError
from .presentation import Presentation
from .words import check_alphabet, format_word, is_cyclically_reduced, is_reduced, parse_word

_GENS = re.compile(r"gens(\s+)(\d+)\s*$")
_REL = re.compile(r"rel(\s+)(\S.*?)\s*$")


def parse_presentation(text: str) -> Presentation:
    m = None
    relators = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        body = line.strip()
        if not body:
            continue
        indent = len(line) - len(line.lstrip())
        if m is None:
            match = _GENS.match(body)
            if match is None:
                raise PresentationParseError("expected 'gens <m>' header", lineno, indent + 1)
            m = int(match.group(2))
            if m < 1:
                raise PresentationParseError("need at least one generator", lineno, indent + 1)
            continue
        match = _REL.match(body)
        if match is None:
            word = "gens" if body.startswith("gens") else body.split()[0]
            raise PresentationParseError(f"expected 'rel <word>', got {word!r}", lineno, indent + 1)
        col = indent + match.start(2) + 1
        text_word = match.group(2)
        try:
            w = parse_word(text_word)
        except WordError as exc:
            raise PresentationParseError(str(exc), lineno, col) from exc
        name = f"relator {len(relators)} ({text_word})"
        if not w:
            raise PresentationParseError(f"{name} is empty", lineno, col)
        try:
            check_alphabet(w, m)
        except WordError as exc:
            raise PresentationParseError(f"{name}: {exc}", lineno, col) from exc
        if not is_reduced(w):
            raise PresentationParseError(f"{name} is not reduced", lineno, col)
        if not is_cyclically_reduced(w):
            raise PresentationParseError(f"{name} is not cyclically reduced", lineno, col)
        relators.append(w)
    if m is None:
        raise PresentationParseError("missing 'gens <m>' header")
    return Presentation(m, tuple(relators))


def format_presentation(p: Presentation) -> str:
    lines = [f"gens {p.m}"]
    lines += [f"rel {format_word(r, p.m)}" for r in p.relators]
    return "\n".join(lines) + "\n"


def read_presentation(path) -> Presentation:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise PresentationParseError(f"file is not UTF-8: {exc}") from exc
    return parse_presentation(text)


def write_presentation(p: Presentation, path) -> None:
    Path(path).write_bytes(format_presentation(p).encode("utf-8"))
