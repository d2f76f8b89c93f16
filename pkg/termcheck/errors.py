"""
Exception hierarchy of the termination checker.

Library code raises these; only the driver catches them and turns them into
error lines and exit codes.
"""

from typing import NamedTuple

from const import RuntimeErrorKind


class Position(NamedTuple):
    """1-based line and column inside the source text."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class TermcheckError(Exception):
    """Root of all errors raised by the checker and the interpreter."""


class SourceError(TermcheckError):
    """An error that points at a place in the program text."""

    def __init__(self, position: Position, message: str) -> None:
        super().__init__(f"{position}: {message}")
        self.position = position
        self.message = message


class LexError(SourceError):
    """Illegal character or unterminated comment."""


class ParseError(SourceError):
    """The token stream does not match the grammar."""

    def __init__(self, position: Position, expected: frozenset[str] | set[str], found: str = "") -> None:
        self.expected = frozenset(expected)
        self.found = found
        message = f"expected {' or '.join(sorted(self.expected))}"
        if found:
            message += f", found {found}"
        super().__init__(position, message)


class EvaluationError(TermcheckError):
    """A term could not be reduced to a value."""

    def __init__(self, kind: RuntimeErrorKind, detail: str = "") -> None:
        super().__init__(f"{kind.value}: {detail}" if detail else kind.value)
        self.kind = kind
        self.detail = detail


class FuelExhausted(EvaluationError):
    """The evaluation step budget ran out."""

    def __init__(self, budget: int) -> None:
        super().__init__(RuntimeErrorKind.FUEL_EXHAUSTED, f"step budget of {budget} exhausted")
        self.budget = budget


class DimensionMismatch(TermcheckError):
    """Matrix dimensions do not fit the requested operation."""


class CallMatrixError(TermcheckError):
    """A row carries more than one known relation."""


class ComposeMismatch(TermcheckError):
    """Two calls do not share the intermediate function."""
