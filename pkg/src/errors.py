"""
exception hierarchy shared by the library and the command line front end.
"""
from __future__ import annotations

from typing import Any, Optional


class JoinForestError(Exception):
    """base class for every error raised by the package."""


class InvalidStructureError(JoinForestError):
    """
    an order, structuring, scheme or layout does not satisfy its definition.

    args:
        reason: short description of the failed condition
        witness: the nodes, lines or pairs that exhibit the failure
    """

    def __init__(self, reason: str, witness: Any = None):
        self.reason = reason
        self.witness = witness
        message = reason if witness is None else f"{reason} (witness: {witness!r})"
        super().__init__(message)


class UnknownNodeError(JoinForestError, KeyError):
    def __init__(self, node: Any):
        self.node = node
        super().__init__(f"unknown node {node!r}")

    def __str__(self) -> str:
        return self.args[0]


class SortError(JoinForestError):
    """ill-sorted term or algebra operation applied to arguments of the wrong sort."""


class FormatError(JoinForestError):
    """
    a text input could not be parsed.

    args:
        message: what went wrong
        line: 1-based line number in the input, when known
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class TermSyntaxError(FormatError):
    pass


class EquationError(JoinForestError):
    """an equation system is unguarded or refers to an undefined unknown."""


class AlphabetMismatchError(JoinForestError):
    pass


class NeedsExpressionError(JoinForestError):
    """letter counts of a raw lazy arrangement cannot be decided."""


class UnsupportedSchemeError(JoinForestError):
    pass


class QuotientError(JoinForestError):
    def __init__(self, message: str, pair: tuple[Any, Any]):
        self.pair = pair
        super().__init__(f"{message}: {pair[0]!r} / {pair[1]!r}")


class NotAQuasiTreeError(JoinForestError):
    pass


class AmbiguityError(JoinForestError):
    pass


class TooLargeError(JoinForestError):
    pass


class PositionError(JoinForestError):
    """a Dewey position leaves the term (a digit exceeds the arity of the symbol above it)."""
