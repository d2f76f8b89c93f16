"""
Call graph completion and the search for lexicographic termination orders.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from errors import ComposeMismatch, DimensionMismatch
from extract import Call, FunctionInfo
from relations import CallMatrix, Relation, RelVector, diagonal, matrix_multiply

_LOG = logging.getLogger(__name__)

EdgeKey = tuple[int, int, CallMatrix]


class CallGraph:
    """
    Functions and the calls between them.

    Edges are deduplicated by (caller, callee, matrix); the first path added
    for a key is the one that is kept.
    """

    def __init__(self, vertices: Iterable[FunctionInfo] = (), edges: Iterable[Call] = ()) -> None:
        self._vertices: dict[int, FunctionInfo] = {}
        self._edges: dict[EdgeKey, Call] = {}
        for vertex in vertices:
            self.add_vertex(vertex)
        for edge in edges:
            self.add_edge(edge)

    @property
    def vertices(self) -> list[FunctionInfo]:
        """Functions in declaration order."""
        return sorted(self._vertices.values(), key=lambda f: f.declaration_order)

    @property
    def edges(self) -> list[Call]:
        """Calls in the order they were added."""
        return list(self._edges.values())

    def keys(self) -> set[EdgeKey]:
        return set(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, key: EdgeKey) -> bool:
        return key in self._edges

    def vertex(self, function_id: int) -> FunctionInfo:
        return self._vertices[function_id]

    def add_vertex(self, vertex: FunctionInfo) -> None:
        self._vertices.setdefault(vertex.id, vertex)

    def add_edge(self, call: Call) -> bool:
        """
        Add a call unless one with the same key is present.

        :return: True if the call was new
        """
        if call.key in self:
            return False
        for function_id in (call.caller, call.callee):
            if function_id not in self._vertices:
                raise KeyError(f"call refers to unknown function {function_id}")
        caller, callee = self._vertices[call.caller], self._vertices[call.callee]
        if (call.matrix.rows, call.matrix.cols) != (callee.arity, caller.arity):
            raise DimensionMismatch(
                f"{caller.display_name} -> {callee.display_name} needs a {callee.arity}x{caller.arity} matrix, "
                f"got {call.matrix.rows}x{call.matrix.cols}"
            )
        self._edges[call.key] = call
        return True

    def copy(self) -> "CallGraph":
        return CallGraph(self._vertices.values(), self._edges.values())

    def path_names(self, path: Sequence[int]) -> list[str]:
        return [self._vertices[f].display_name for f in path]

    def self_edges(self, function_id: int) -> list[Call]:
        """
        Calls from a function to itself, shortest path first, then by path names and matrix.

        Functions of arity 0 have no parameters to decrease and are never recursive.
        """
        if self._vertices[function_id].arity == 0:
            return []
        loops = [c for c in self._edges.values() if c.caller == function_id and c.callee == function_id]
        return sorted(loops, key=lambda c: (len(c.path), self.path_names(c.path), c.matrix.render()))


def combine(second: Call, first: Call) -> Call:
    """
    Combine ``first`` (f -> g) with ``second`` (g -> h) into f -> h.

    The combined matrix is ``second.matrix @ first.matrix``.
    """
    if first.callee != second.caller:
        raise ComposeMismatch(f"call ending in {first.callee} cannot be followed by one starting in {second.caller}")
    return Call(
        first.caller,
        second.callee,
        matrix_multiply(second.matrix, first.matrix),
        first.path + second.path[1:],
    )


def complete_graph(graph: CallGraph) -> CallGraph:
    """
    Close a call graph under call combination.

    Iterates E(n+1) = E(n) | (E(n) o E) until nothing new appears. Only the
    calls found in the previous round can produce new combinations.
    """
    completed = graph.copy()
    base = graph.edges
    frontier = base
    rounds = 0
    while frontier:
        rounds += 1
        discovered = []
        for call in frontier:
            for edge in base:
                if edge.callee == call.caller:
                    combined = combine(call, edge)
                    if completed.add_edge(combined):
                        discovered.append(combined)
        frontier = discovered
    _LOG.debug("Completed %d call(s) to %d in %d round(s)", len(graph), len(completed), rounds)
    return completed


@dataclass(frozen=True)
class RecursionBehaviour:
    """Diagonals of all calls of a function to itself."""

    function: int
    rows: tuple[tuple[RelVector, tuple[int, ...]], ...]

    @property
    def diagonals(self) -> list[RelVector]:
        return [d for d, _ in self.rows]


def recursion_behaviour(graph: CallGraph, function_id: int) -> RecursionBehaviour:
    """
    Collect the recursion behaviour of a function from a completed graph.

    :param graph: completed call graph
    :param function_id: the function
    """
    return RecursionBehaviour(
        function_id, tuple((diagonal(c.matrix), c.path) for c in graph.self_edges(function_id))
    )


@dataclass(frozen=True)
class TerminationOrder:
    """Parameter positions, most significant first."""

    indices: tuple[int, ...] = ()

    def __str__(self) -> str:
        return " ".join(str(i) for i in self.indices)

    def extend(self, arity: int) -> tuple[int, ...]:
        """Complete the order to a permutation by appending the unused positions in ascending order."""
        return self.indices + tuple(i for i in range(arity) if i not in self.indices)


def find_termination_order(behaviour: Iterable[Sequence[Relation]], arity: int) -> TerminationOrder | None:
    """
    Search a lexicographic termination order.

    A parameter qualifies when some call decreases it and no call loses track of
    it. The smallest qualifying parameter is chosen, the calls that decrease it
    are discharged, and the search continues on the rest.

    :param behaviour: recursion behaviour, one row per call
    :param arity: number of parameters
    :return: the order, or None if there is none
    """
    rows = [tuple(row) for row in behaviour]
    for row in rows:
        if len(row) != arity:
            raise DimensionMismatch(f"behaviour row of length {len(row)} for arity {arity}")
    columns = list(range(arity))
    chosen: list[int] = []
    while rows:
        for position, column in enumerate(columns):
            values = [row[position] for row in rows]
            if Relation.LESS in values and Relation.UNKNOWN not in values:
                break
        else:
            return None
        chosen.append(column)
        rows = [row[:position] + row[position + 1 :] for row in rows if row[position] != Relation.LESS]
        del columns[position]
    return TerminationOrder(tuple(chosen))


def verify_order_def1(behaviour: Iterable[Sequence[Relation]], permutation: Sequence[int]) -> bool:
    """
    Check the non-inductive definition of a termination order.

    Every row needs a position k of the permutation where it is Less while all
    positions before k (strictly) are Equal.
    """
    if sorted(permutation) != list(range(len(permutation))):
        raise ValueError(f"{list(permutation)} is not a permutation")
    for row in behaviour:
        for index in permutation:
            if row[index] == Relation.LESS:
                break
            if row[index] != Relation.EQUAL:
                return False
        else:
            return False
    return True


@dataclass(frozen=True)
class PassesNoRecursion:
    """The function never calls itself."""


@dataclass(frozen=True)
class PassesWithOrder:
    order: TerminationOrder


@dataclass(frozen=True)
class Fails:
    """No lexicographic order proves termination."""


Verdict = PassesNoRecursion | PassesWithOrder | Fails


def check_function(graph: CallGraph, function_id: int) -> Verdict:
    """
    Decide termination of one function.

    :param graph: completed call graph
    :param function_id: the function to check
    """
    behaviour = recursion_behaviour(graph, function_id)
    function = graph.vertex(function_id)
    if not behaviour.rows:
        verdict: Verdict = PassesNoRecursion()
    else:
        order = find_termination_order(behaviour.diagonals, function.arity)
        verdict = Fails() if order is None else PassesWithOrder(order)
    _LOG.debug("%s: %s", function.display_name, verdict)
    return verdict
