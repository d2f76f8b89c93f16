"""
Call-by-value evaluation of terms in a closure environment.

Let and definition bindings are stored unevaluated and re-evaluated on every
lookup, so a binding that would not terminate only hurts when it is used.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from const import RuntimeErrorKind
from errors import EvaluationError, FuelExhausted
from syntax import App, Binding, Case, Con, Lam, Let, Proj, Term, Tuple, Var

_LOG = logging.getLogger(__name__)


class Value:
    """Base class of evaluation results."""

    __slots__ = ()


@dataclass(frozen=True)
class ConV(Value):
    constant: str
    arg: Value


@dataclass(frozen=True)
class TupleV(Value):
    entries: tuple[tuple[str, Value], ...] = ()

    def get(self, label: str) -> Value | None:
        """Return the component with the given label, if any."""
        for name, value in self.entries:
            if name == label:
                return value
        return None


@dataclass(frozen=True, eq=False)
class ClosureV(Value):
    param: str
    body: Term
    env: "Env"


UNIT = TupleV()


@dataclass(frozen=True)
class Thunk:
    """A let or definition binding, evaluated on demand in the environment it closes over."""

    term: Term
    env: "Env"


@dataclass(frozen=True)
class Evaluated:
    """A lambda parameter or case binder, already a value."""

    value: Value


class Env:
    """
    Chain of frames mapping names to bindings.

    Lookup returns the innermost binding of a name.
    """

    def __init__(self, frame: dict[str, Thunk | Evaluated] | None = None, parent: "Env | None" = None) -> None:
        self._frame: dict[str, Thunk | Evaluated] = frame if frame is not None else {}
        self._parent = parent

    @classmethod
    def global_env(cls) -> "Env":
        """Return an empty top-level environment."""
        return cls()

    def bind(self, name: str, value: Value) -> "Env":
        """Return a new environment with ``name`` bound to an evaluated value."""
        return Env({name: Evaluated(value)}, self)

    def define(self, bindings: Iterable[Binding]) -> "Env":
        """Return a new environment with one recursive frame: every thunk closes over the frame itself."""
        frame: dict[str, Thunk | Evaluated] = {}
        env = Env(frame, self)
        for binding in bindings:
            frame[binding.name] = Thunk(binding.term, env)
        return env

    def lookup(self, name: str) -> Thunk | Evaluated | None:
        env: Env | None = self
        while env is not None:
            if name in env._frame:
                return env._frame[name]
            env = env._parent
        return None


@dataclass
class Fuel:
    """Optional step budget; ``None`` means unlimited."""

    budget: int | None = None
    used: int = field(default=0, init=False)

    def consume(self) -> None:
        self.used += 1
        if self.budget is not None and self.used > self.budget:
            raise FuelExhausted(self.budget)


def evaluate(term: Term, env: Env, fuel: int | Fuel | None = None) -> Value:
    """
    Evaluate a term to a value.

    :param term: the term
    :param env: environment binding every free variable of the term
    :param fuel: optional step budget; every beta, case, projection and lookup step costs one
    :return: the fully evaluated value
    """
    if not isinstance(fuel, Fuel):
        fuel = Fuel(fuel)
    try:
        value = _eval(term, env, fuel)
    except RecursionError:
        raise EvaluationError(RuntimeErrorKind.RECURSION_DEPTH, "evaluation nested too deeply")
    _LOG.debug("Evaluated in %d step(s)", fuel.used)
    return value


def _eval(term: Term, env: Env, fuel: Fuel) -> Value:
    match term:
        case Var(name):
            fuel.consume()
            binding = env.lookup(name)
            if binding is None:
                raise EvaluationError(RuntimeErrorKind.UNBOUND_VARIABLE, name)
            if isinstance(binding, Evaluated):
                return binding.value
            return _eval(binding.term, binding.env, fuel)
        case Lam(param, body):
            return ClosureV(param, body, env)
        case App(fun, arg):
            function = _eval(fun, env, fuel)
            argument = _eval(arg, env, fuel)
            if not isinstance(function, ClosureV):
                raise EvaluationError(RuntimeErrorKind.APPLY_NON_FUNCTION, render_value(function))
            fuel.consume()
            return _eval(function.body, function.env.bind(function.param, argument), fuel)
        case Con(constant, arg):
            return ConV(constant, _eval(arg, env, fuel))
        case Case(scrutinee, branches):
            value = _eval(scrutinee, env, fuel)
            if not isinstance(value, ConV):
                raise EvaluationError(RuntimeErrorKind.CASE_NON_CONSTRUCTOR, render_value(value))
            fuel.consume()
            for branch in branches:
                if branch.constant == value.constant:
                    return _eval(branch.body, env.bind(branch.binder, value.arg), fuel)
            raise EvaluationError(RuntimeErrorKind.NO_MATCHING_BRANCH, value.constant)
        case Tuple(entries):
            return TupleV(tuple((label, _eval(value, env, fuel)) for label, value in entries))
        case Proj(inner, label):
            value = _eval(inner, env, fuel)
            if not isinstance(value, TupleV):
                raise EvaluationError(RuntimeErrorKind.PROJECT_NON_TUPLE, f"{render_value(value)}.{label}")
            fuel.consume()
            component = value.get(label)
            if component is None:
                raise EvaluationError(RuntimeErrorKind.MISSING_LABEL, label)
            return component
        case Let(bindings, body):
            return _eval(body, env.define(bindings), fuel)
    raise TypeError(f"not a term: {term!r}")


def render_value(value: Value) -> str:
    """Render a value the way result lines print it, e.g. ``Cons(HD=A(), TL=Nil())``."""
    match value:
        case ConV(constant, TupleV(entries)):
            return f"{constant}({_render_entries(entries)})"
        case ConV(constant, arg):
            return f"{constant}({render_value(arg)})"
        case TupleV(entries):
            return f"({_render_entries(entries)})"
        case ClosureV(param):
            return f"[{param}]<fn>"
    raise TypeError(f"not a value: {value!r}")


def _render_entries(entries: tuple[tuple[str, Value], ...]) -> str:
    return ", ".join(f"{label}={render_value(value)}" for label, value in entries)
