"""
Statement-by-statement processing of a program.

Definitions extend the environment and the call graph and are checked at
once; terms are evaluated. Everything worth printing is announced as an event.
"""

import logging
from dataclasses import dataclass

from pyee.base import EventEmitter

from checker import CallGraph, Fails, PassesWithOrder, Verdict, check_function, complete_graph
from config import Options
from const import EVENTS
from errors import EvaluationError
from evaluator import Env, Fuel, evaluate, render_value
from extract import Call, Extractor, FunctionInfo
from relations import CallMatrix, RelVector, diagonal, render_vector
from syntax import Define, Evaluate, Program, Statement, pretty

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class CallLine:
    diagonal: RelVector
    path: tuple[str, ...]
    matrix: CallMatrix

    def render(self, verbose: bool = False) -> str:
        line = f"{render_vector(self.diagonal)}: {' -> '.join(self.path)}"
        if verbose:
            line += "".join(f"\n    {render_vector(row)}" for row in self.matrix.entries)
        return line


@dataclass(frozen=True)
class VerdictLine:
    name: str
    verdict: Verdict

    def render(self) -> str:
        match self.verdict:
            case PassesWithOrder(order):
                return f"{self.name} passes termination check by lexical order {order}"
            case Fails():
                return f"{self.name} FAILS termination check"
        return f"{self.name} passes termination check"


@dataclass(frozen=True)
class ResultLine:
    value: str

    def render(self) -> str:
        return f"result: {self.value}"


@dataclass(frozen=True)
class ErrorLine:
    message: str

    def render(self) -> str:
        return f"error: {self.message}"


OutputLine = CallLine | VerdictLine | ResultLine | ErrorLine


class Session:
    """State of one program run: environment, functions and call graphs."""

    def __init__(self, options: Options | None = None) -> None:
        self.options = options or Options()
        self.events = EventEmitter()
        self.env = Env.global_env()
        self.extractor = Extractor()
        self.graph = CallGraph()
        self.completed = CallGraph()
        self.verdicts: dict[int, Verdict] = {}
        self.runtime_errors = 0

    @property
    def failures(self) -> list[FunctionInfo]:
        """Functions that failed the check, in declaration order."""
        return [self.extractor.function(f) for f, v in self.verdicts.items() if isinstance(v, Fails)]

    def run(self, program: Program) -> None:
        for statement in program.statements:
            self.process(statement)

    def process(self, statement: Statement) -> None:
        if isinstance(statement, Define):
            self.define(statement)
        elif self.options.evaluate:
            self.evaluate(statement)

    def define(self, statement: Define) -> None:
        """Store the definitions and check every function they introduce."""
        self.env = self.env.define(statement.bindings)
        if not self.options.analyze:
            return
        functions, calls = self.extractor.add_definition(statement)
        for function in functions:
            self.graph.add_vertex(function)
        for call in calls:
            self.graph.add_edge(call)
        self.completed = complete_graph(self.graph)
        for function in functions:
            self.events.emit(EVENTS.DEFINED, function)
            for call in self.completed.self_edges(function.id):
                self.events.emit(EVENTS.CALL, self._call_line(call))
            verdict = check_function(self.completed, function.id)
            self.verdicts[function.id] = verdict
            self.events.emit(EVENTS.VERDICT, VerdictLine(function.display_name, verdict))

    def evaluate(self, statement: Evaluate) -> None:
        """Evaluate a term and announce its value or the reason it has none."""
        if _LOG.isEnabledFor(logging.DEBUG):
            _LOG.debug("Evaluating %s", pretty(statement.term))
        fuel = Fuel(self.options.fuel)
        try:
            value = evaluate(statement.term, self.env, fuel)
        except EvaluationError as err:
            self.runtime_errors += 1
            where = f"{statement.position}: " if statement.position else ""
            _LOG.error("Evaluation failed after %d step(s): %s", fuel.used, err)
            self.events.emit(EVENTS.ERROR, ErrorLine(f"{where}{err}"))
            return
        self.events.emit(EVENTS.RESULT, ResultLine(render_value(value)))

    def _call_line(self, call: Call) -> CallLine:
        return CallLine(diagonal(call.matrix), tuple(self.completed.path_names(call.path)), call.matrix)
