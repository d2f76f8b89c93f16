"""
Static analysis: find the functions of a program and the calls between them.

Every definition and every let binding is a function whose arity is the number
of its leading lambdas. Each call records, in a call matrix, how the call
arguments relate to the parameters of the calling function.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from errors import Position
from relations import CallMatrix, Relation, RelVector, rel_times, unit_vector, unknown_vector
from syntax import App, Binding, Case, Con, Define, Lam, Let, Program, Proj, Term, Tuple, Var, lambda_params

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class FunctionInfo:
    id: int
    """Unique identifier, also the declaration ordinal"""
    display_name: str
    """Name in the source text; not unique across scopes"""
    arity: int
    """Number of leading lambdas"""
    params: tuple[str, ...]
    """Parameter names"""
    definition_site: Position | None = None
    """Where the binding starts"""
    declaration_order: int = 0
    """Global ordinal: source order, outer definitions before their let-nested ones"""
    parent: int | None = None
    """Enclosing function for let-nested functions"""


@dataclass(frozen=True)
class Call:
    """A (possibly combined) call from ``caller`` to ``callee`` through ``path``."""

    caller: int
    callee: int
    matrix: CallMatrix
    path: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.path) < 2 or self.path[0] != self.caller or self.path[-1] != self.callee:
            raise ValueError(f"path {self.path} does not lead from {self.caller} to {self.callee}")

    @property
    def key(self) -> tuple[int, int, CallMatrix]:
        """Identity of the call in a call graph; the path is not part of it."""
        return self.caller, self.callee, self.matrix


@dataclass(frozen=True)
class _Local:
    """A variable bound inside a function body, with its relation to the owner's parameters."""

    owner: int
    vector: RelVector


_Entry = _Local | FunctionInfo


@dataclass(frozen=True)
class AnalysisContext:
    """The function under analysis and what every name in scope stands for."""

    function: FunctionInfo
    scope: Mapping[str, _Entry]

    @property
    def unknown(self) -> RelVector:
        return unknown_vector(self.function.arity)

    def vector(self, name: str) -> RelVector | None:
        """
        Relation vector of a variable w.r.t. the current function's parameters.

        Variables of enclosing functions are unrelated to the current parameters.
        Returns None when ``name`` is not a variable in scope.
        """
        entry = self.scope.get(name)
        if not isinstance(entry, _Local):
            return None
        if entry.owner != self.function.id:
            return self.unknown
        return entry.vector

    def resolve_function(self, name: str) -> FunctionInfo | None:
        entry = self.scope.get(name)
        return entry if isinstance(entry, FunctionInfo) else None

    def with_local(self, name: str, vector: RelVector) -> "AnalysisContext":
        return AnalysisContext(self.function, {**self.scope, name: _Local(self.function.id, vector)})

    def with_functions(self, functions: Iterable[FunctionInfo]) -> "AnalysisContext":
        return AnalysisContext(self.function, {**self.scope, **{f.display_name: f for f in functions}})


def spine(term: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... ak`` into its head and arguments."""
    args: list[Term] = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fun
    args.reverse()
    return term, args


def relation_to_params(term: Term, ctx: AnalysisContext) -> RelVector:
    """
    Relation of a term to each parameter of the function under analysis.

    Variables carry their recorded vector, a projection is as big as its tuple
    and an application is as big as its head variable. Anything else is unknown.
    """
    match term:
        case Var(name):
            vector = ctx.vector(name)
            return vector if vector is not None else ctx.unknown
        case Proj(inner, _):
            return relation_to_params(inner, ctx)
        case App():
            head, _ = spine(term)
            if isinstance(head, Var):
                vector = ctx.vector(head.name)
                if vector is not None:
                    return vector
    return ctx.unknown


def destructed(vector: RelVector) -> RelVector:
    """Vector of a case binder: the constructor argument is smaller than the scrutinee."""
    return tuple(rel_times(Relation.LESS, r) for r in vector)


def nested_functions(term: Term) -> int:
    """Number of let bindings inside a term, at any depth."""
    match term:
        case Lam(_, body):
            return nested_functions(body)
        case App(fun, arg):
            return nested_functions(fun) + nested_functions(arg)
        case Con(_, arg) | Proj(arg, _):
            return nested_functions(arg)
        case Case(scrutinee, branches):
            return nested_functions(scrutinee) + sum(nested_functions(b.body) for b in branches)
        case Tuple(entries):
            return sum(nested_functions(value) for _, value in entries)
        case Let(bindings, body):
            return sum(1 + nested_functions(b.term) for b in bindings) + nested_functions(body)
    return 0


class Extractor:
    """
    Collects functions and calls statement by statement.

    Names resolve to the definitions seen so far, so a statement can call
    functions of earlier statements but never of later ones. A function name
    makes a call only where it is applied. Function ids follow the source
    text: a binding comes right before the functions nested in it, and those
    come before its next sibling.
    """

    def __init__(self) -> None:
        self.calls: list[Call] = []
        self._functions: dict[int, FunctionInfo] = {}
        self._globals: dict[str, FunctionInfo] = {}
        self._next_id = 0

    @property
    def functions(self) -> list[FunctionInfo]:
        """Functions in declaration order."""
        return [self._functions[i] for i in sorted(self._functions)]

    def function(self, function_id: int) -> FunctionInfo:
        return self._functions[function_id]

    def add_definition(self, statement: Define) -> tuple[list[FunctionInfo], list[Call]]:
        """
        Analyze one definition statement.

        :param statement: the simultaneous definitions
        :return: the functions it introduces and the calls made inside them
        """
        first_function, first_call = self._next_id, len(self.calls)
        infos = self._declare(statement.bindings, None)
        self._globals.update({info.display_name: info for info in infos})
        self._analyze_group(statement.bindings, infos, dict(self._globals))
        functions = [f for f in self.functions if f.id >= first_function]
        calls = self.calls[first_call:]
        _LOG.debug(
            "Statement %s: %d function(s), %d call(s)", ", ".join(statement.names), len(functions), len(calls)
        )
        return functions, calls

    def _declare(self, bindings: Iterable[Binding], parent: int | None) -> list[FunctionInfo]:
        """Number a group of bindings, leaving room for the functions nested in each."""
        infos = []
        for binding in bindings:
            params, _ = lambda_params(binding.term)
            info = FunctionInfo(
                id=self._next_id,
                display_name=binding.name,
                arity=len(params),
                params=tuple(params),
                definition_site=binding.position,
                declaration_order=self._next_id,
                parent=parent,
            )
            self._functions[info.id] = info
            infos.append(info)
            self._next_id += 1 + nested_functions(binding.term)
        return infos

    def _analyze_group(
        self, bindings: Iterable[Binding], infos: list[FunctionInfo], scope: Mapping[str, _Entry]
    ) -> None:
        end = self._next_id
        for binding, info in zip(bindings, infos, strict=True):
            self._next_id = info.id + 1
            self._analyze_function(binding.term, info, scope)
        self._next_id = end

    def _analyze_function(self, term: Term, info: FunctionInfo, scope: Mapping[str, _Entry]) -> None:
        params, body = lambda_params(term)
        ctx = AnalysisContext(info, scope)
        for index, param in enumerate(params):
            ctx = ctx.with_local(param, unit_vector(info.arity, index))
        self._walk(body, ctx)

    def _walk(self, term: Term, ctx: AnalysisContext) -> None:
        match term:
            case App():
                head, args = spine(term)
                callee = ctx.resolve_function(head.name) if isinstance(head, Var) else None
                if callee is not None:
                    self._record(ctx, callee, args)
                else:
                    self._walk(head, ctx)
                for arg in args:
                    self._walk(arg, ctx)
            case Lam(param, body):
                self._walk(body, ctx.with_local(param, ctx.unknown))
            case Con(_, arg):
                self._walk(arg, ctx)
            case Case(scrutinee, branches):
                self._walk(scrutinee, ctx)
                binder = destructed(relation_to_params(scrutinee, ctx))
                for branch in branches:
                    self._walk(branch.body, ctx.with_local(branch.binder, binder))
            case Tuple(entries):
                for _, value in entries:
                    self._walk(value, ctx)
            case Proj(inner, _):
                self._walk(inner, ctx)
            case Let(bindings, body):
                infos = self._declare(bindings, ctx.function.id)
                inner = ctx.with_functions(infos)
                self._analyze_group(bindings, infos, inner.scope)
                self._walk(body, inner)

    def _record(self, ctx: AnalysisContext, callee: FunctionInfo, args: list[Term]) -> None:
        caller = ctx.function
        rows = tuple(
            relation_to_params(args[j], ctx) if j < len(args) else ctx.unknown for j in range(callee.arity)
        )
        call = Call(caller.id, callee.id, CallMatrix(callee.arity, caller.arity, rows), (caller.id, callee.id))
        _LOG.debug("Call %s -> %s: %s", caller.display_name, callee.display_name, call.matrix)
        self.calls.append(call)


def extract_calls(program: Program) -> tuple[list[FunctionInfo], list[Call]]:
    """
    Extract every function and every call of a program.

    :param program: the parsed program
    :return: functions in declaration order and calls in discovery order
    """
    extractor = Extractor()
    for statement in program.definitions:
        extractor.add_definition(statement)
    return extractor.functions, extractor.calls
