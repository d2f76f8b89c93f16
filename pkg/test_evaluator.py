import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from const import RuntimeErrorKind
from errors import EvaluationError, FuelExhausted
from evaluator import UNIT, ClosureV, ConV, Env, Fuel, TupleV, evaluate, render_value
from syntax import Define, Var, parse, parse_term

NATURALS = """
add = [x][y]case x of
        { O z => y
        | S x' => S(add x' y) };
p = [x]case x of { O z => O z | S x' => x' };
sub = [x][y]case x of
        { O z => y
        | S x' => sub x' (p y) };
div = [x][y]let
        div' = [y']case y' of
                { O z => O z
                | S dummy => S(div' (sub x y')) }
        in
        (div' (sub (p x) y));
"""


def environment(source):
    env = Env.global_env()
    for statement in parse(source).statements:
        if isinstance(statement, Define):
            env = env.define(statement.bindings)
    return env


def run(term, source=NATURALS, fuel=100_000):
    return render_value(evaluate(parse_term(term), environment(source), fuel))


def nat(n):
    return "O()" if n == 0 else f"S({nat(n - 1)})"


def test_addition():
    assert run("add (S(S(O()))) (S(O()))") == "S(S(S(O())))"


def test_division():
    assert run("div (S(S(O()))) (S(S(S(S(S(O()))))))") == "S(S(O()))"


@pytest.mark.parametrize("x, y", [(0, 0), (0, 3), (2, 1), (3, 4)])
def test_add_matches_integers(x, y):
    assert run(f"add ({nat(x)}) ({nat(y)})") == nat(x + y)


@pytest.mark.parametrize("x, y", [(0, 2), (2, 4), (4, 2), (3, 3)])
def test_sub_is_truncated(x, y):
    assert run(f"sub ({nat(x)}) ({nat(y)})") == nat(max(y - x, 0))


def test_values():
    env = Env.global_env()
    assert evaluate(parse_term("()"), env) == UNIT
    assert evaluate(parse_term("O()"), env) == ConV("O", UNIT)
    assert evaluate(parse_term("(A=O(), B=(C=()))"), env) == TupleV((("A", ConV("O", UNIT)), ("B", TupleV((("C", UNIT),)))))
    assert isinstance(evaluate(parse_term("[x]x"), env), ClosureV)


@pytest.mark.parametrize(
    "source, expected",
    [
        ("O()", "O()"),
        ("S(S(O()))", "S(S(O()))"),
        ("F(A())", "F(A())"),
        ("Cons(HD=A(), TL=Nil())", "Cons(HD=A(), TL=Nil())"),
        ("(X=O(), Y=S(O()))", "(X=O(), Y=S(O()))"),
        ("()", "()"),
        ("[x]x", "[x]<fn>"),
        ("(HD=[y]y).HD", "[y]<fn>"),
    ],
)
def test_render_value(source, expected):
    assert render_value(evaluate(parse_term(source), Env.global_env())) == expected


def test_case_binds_the_constructor_argument():
    assert run("case Cons(HD=A(), TL=Nil()) of { Nil z => z | Cons p => p.TL }", "") == "Nil()"


def test_let_is_recursive():
    term = "let ones = [n]case n of { O z => Nil() | S m => Cons(HD=O(), TL=ones m) } in ones (S(S(O())))"
    assert run(term, "") == "Cons(HD=O(), TL=Cons(HD=O(), TL=Nil()))"


def test_later_definitions_shadow_earlier_ones():
    source = "x = A(); y = [u]x; x = B();"
    assert run("x", source) == "B()"
    assert run("y ()", source) == "A()"


def test_call_by_value_evaluates_unused_arguments():
    with pytest.raises(EvaluationError) as err:
        run("([x]O()) missing", "")
    assert err.value.kind is RuntimeErrorKind.UNBOUND_VARIABLE


def test_unused_let_binding_is_never_evaluated():
    assert run("let loop = loop in O()", "") == "O()"


@pytest.mark.parametrize(
    "term, kind",
    [
        ("nothing", RuntimeErrorKind.UNBOUND_VARIABLE),
        ("case A() of { B b => b }", RuntimeErrorKind.NO_MATCHING_BRANCH),
        ("(X=A()).Y", RuntimeErrorKind.MISSING_LABEL),
        ("O() O()", RuntimeErrorKind.APPLY_NON_FUNCTION),
        ("case () of { A a => a }", RuntimeErrorKind.CASE_NON_CONSTRUCTOR),
        ("(O()).X", RuntimeErrorKind.PROJECT_NON_TUPLE),
    ],
)
def test_runtime_errors(term, kind):
    with pytest.raises(EvaluationError) as err:
        run(term, "")
    assert err.value.kind is kind
    assert str(err.value).startswith(kind.value)


def test_fuel_stops_divergence():
    with pytest.raises(FuelExhausted) as err:
        run("loop ()", "loop = [x]loop x;", fuel=50)
    assert err.value.budget == 50
    assert err.value.kind is RuntimeErrorKind.FUEL_EXHAUSTED


def test_fuel_counts_steps():
    fuel = Fuel()
    evaluate(parse_term("([x]x) O()"), Env.global_env(), fuel)
    assert fuel.used == 2


def test_env_lookup():
    env = Env.global_env().bind("a", UNIT).define(parse("b = a;").statements[0].bindings)
    assert env.lookup("a") is not None
    assert env.lookup("b") is not None
    assert env.lookup("c") is None
    assert evaluate(Var("b"), env) == UNIT


small = st.integers(0, 4)
closed_terms = st.one_of(
    st.builds(lambda x, y: f"add ({nat(x)}) ({nat(y)})", small, small),
    st.builds(lambda x, y: f"sub ({nat(x)}) ({nat(y)})", small, small),
    st.builds(lambda x, y: f"div ({nat(x)}) ({nat(y)})", small, small),
    st.just("loop ()"),
)


@settings(max_examples=200, deadline=None)
@given(closed_terms, st.integers(0, 300), st.integers(0, 300))
def test_more_fuel_never_changes_a_value(term, budget, extra):
    env = environment(NATURALS + "loop = [x]loop x;")
    try:
        value = evaluate(parse_term(term), env, budget)
    except FuelExhausted:
        return
    assert evaluate(parse_term(term), env, budget + extra) == value
    assert evaluate(parse_term(term), env) == value
