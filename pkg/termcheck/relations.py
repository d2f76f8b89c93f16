"""
The three-element relation rig and call-matrix algebra over it.

Rows of a call matrix stand for the arguments of the callee, columns for the
parameters of the caller.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import reduce

from errors import CallMatrixError, DimensionMismatch


class Relation(str, Enum):
    """Relation of a call argument to a caller parameter."""

    LESS = "<"
    EQUAL = "="
    UNKNOWN = "?"

    def __str__(self) -> str:
        return self.value

    def __add__(self, other: "Relation") -> "Relation":
        return rel_plus(self, other)

    def __mul__(self, other: "Relation") -> "Relation":
        return rel_times(self, other)


RelVector = tuple[Relation, ...]


def rel_plus(a: Relation, b: Relation) -> Relation:
    """Parallel combination: Less dominates, Unknown is neutral."""
    if Relation.LESS in (a, b):
        return Relation.LESS
    if Relation.EQUAL in (a, b):
        return Relation.EQUAL
    return Relation.UNKNOWN


def rel_times(a: Relation, b: Relation) -> Relation:
    """Serial combination: Unknown annihilates, Equal is neutral."""
    if Relation.UNKNOWN in (a, b):
        return Relation.UNKNOWN
    if Relation.LESS in (a, b):
        return Relation.LESS
    return Relation.EQUAL


def rel_sum(relations: Iterable[Relation]) -> Relation:
    """Sum of any number of relations; the empty sum is Unknown."""
    return reduce(rel_plus, relations, Relation.UNKNOWN)


def unknown_vector(length: int) -> RelVector:
    """Return a vector that knows nothing about any of ``length`` parameters."""
    return (Relation.UNKNOWN,) * length


def unit_vector(length: int, index: int) -> RelVector:
    """Return the vector of parameter ``index`` itself: Equal there, Unknown elsewhere."""
    return tuple(Relation.EQUAL if i == index else Relation.UNKNOWN for i in range(length))


def render_vector(vector: Sequence[Relation]) -> str:
    """Render relations space separated, e.g. ``< =``."""
    return " ".join(r.value for r in vector)


@dataclass(frozen=True)
class CallMatrix:
    """
    A matrix over the relation rig with at most one known entry per row.

    :param rows: number of callee arguments
    :param cols: number of caller parameters
    :param entries: ``rows`` tuples of ``cols`` relations each
    """

    rows: int
    cols: int
    entries: tuple[RelVector, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise DimensionMismatch(f"expected {self.rows} rows, got {len(self.entries)}")
        for index, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise DimensionMismatch(f"row {index} has {len(row)} entries, expected {self.cols}")
            known = sum(1 for r in row if r != Relation.UNKNOWN)
            if known > 1:
                raise CallMatrixError(f"row {index} ({render_vector(row)}) has {known} known relations")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Relation | str]], cols: int | None = None) -> "CallMatrix":
        """
        Build a matrix from rows of relations or their one-character spellings.

        :param rows: the matrix rows
        :param cols: column count, required when there are no rows
        """
        entries = tuple(tuple(Relation(r) for r in row) for row in rows)
        if cols is None:
            if not entries:
                raise DimensionMismatch("column count of a matrix without rows must be given")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, size: int) -> "CallMatrix":
        """Equal on the diagonal, Unknown elsewhere."""
        return cls(size, size, tuple(unit_vector(size, i) for i in range(size)))

    @classmethod
    def unknown(cls, rows: int, cols: int) -> "CallMatrix":
        """The matrix that relates nothing."""
        return cls(rows, cols, tuple(unknown_vector(cols) for _ in range(rows)))

    @property
    def is_square(self) -> bool:
        """Whether the matrix describes a call from a function to one of the same arity."""
        return self.rows == self.cols

    def __getitem__(self, index: int) -> RelVector:
        return self.entries[index]

    def __matmul__(self, other: "CallMatrix") -> "CallMatrix":
        return matrix_multiply(self, other)

    def render(self) -> str:
        """Row-major compact form, e.g. ``[<?][?=]``."""
        return "".join("[" + "".join(r.value for r in row) + "]" for row in self.entries)

    def __str__(self) -> str:
        return self.render()


def matrix_multiply(a: CallMatrix, b: CallMatrix) -> CallMatrix:
    """
    Multiply two call matrices over the rig.

    :param a: matrix of shape (n, m)
    :param b: matrix of shape (m, l)
    :return: the (n, l) product
    """
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    entries = tuple(
        tuple(rel_sum(rel_times(a[i][k], b[k][j]) for k in range(a.cols)) for j in range(b.cols))
        for i in range(a.rows)
    )
    return CallMatrix(a.rows, b.cols, entries)


def diagonal(matrix: CallMatrix) -> RelVector:
    """Return the diagonal of a square matrix."""
    if not matrix.is_square:
        raise DimensionMismatch(f"diagonal of a {matrix.rows}x{matrix.cols} matrix")
    return tuple(matrix[i][i] for i in range(matrix.rows))
