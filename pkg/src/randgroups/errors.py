"""Exception types shared across the package."""

from __future__ import annotations


class RandGroupsError(Exception):
    """Base class for all library errors."""


class WordError(RandGroupsError, ValueError):
    """A word violates a structural requirement (not reduced, empty, ...)."""


class PreconditionError(RandGroupsError, ValueError):
    """A mathematical hypothesis required by an operation does not hold."""


class InfeasibleConfigError(RandGroupsError, ValueError):
    """A configuration exceeds the desk-scale guards."""


class PresentationParseError(RandGroupsError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DiagramError(RandGroupsError, ValueError):
    """A van Kampen diagram is malformed or mislabelled."""
