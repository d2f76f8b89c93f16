import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from checker import (
    CallGraph,
    Fails,
    PassesNoRecursion,
    PassesWithOrder,
    TerminationOrder,
    check_function,
    combine,
    complete_graph,
    find_termination_order,
    recursion_behaviour,
    verify_order_def1,
)
from errors import ComposeMismatch, DimensionMismatch
from extract import Call, FunctionInfo, extract_calls
from relations import CallMatrix, Relation, matrix_multiply
from syntax import parse

LESS, EQUAL, UNKNOWN = Relation.LESS, Relation.EQUAL, Relation.UNKNOWN


def function(id, arity, name=None):
    return FunctionInfo(id, name or f"f{id}", arity, tuple(f"x{i}" for i in range(arity)), declaration_order=id)


def rows(*texts):
    return [tuple(Relation(r) for r in text) for text in texts]


def graph_of(source):
    functions, calls = extract_calls(parse(source))
    return complete_graph(CallGraph(functions, calls)), {f.display_name: f.id for f in functions}


def verdict(source, name):
    graph, ids = graph_of(source)
    return check_function(graph, ids[name])


def diagonals(source, name):
    graph, ids = graph_of(source)
    return sorted(" ".join(d) for d in recursion_behaviour(graph, ids[name]).diagonals)


ADD = "add = [x][y]case x of { O z => y | S x' => S(add x' y) };"
ACK = (
    "ack = [x][y]case x of { O z => S(y) "
    "| S x' => ack x' (case y of { O z => S(O()) | S y' => ack x y' }) };"
)
FLATTEN = (
    "f = [l]case l of { Nil z => Nil() | Cons p => g p.HD p.TL },"
    "g = [l][ls]case l of { Nil z => f ls | Cons p => Cons(HD=p.HD, TL=(g p.TL ls)) };"
)
MERGE = (
    "merge = [le][l1][l2]case l1 of { Nil z => l2 | Cons p1 => case l2 of { Nil z => l1 "
    "| Cons p2 => case (le p1.HD p2.HD) of { True z => Cons(HD=p1.HD, TL=merge le p1.TL l2) "
    "| False z => Cons(HD=p2.HD, TL=merge le l1 p2.TL) }}};"
)
ZIP = "zip = [l1][l2]case l1 of { Nil z => l2 | Cons p1 => Cons(HD=p1.HD, TL=zip l2 p1.TL) };"
FGH = """
h = [x][y]case x of
        { O z  => case y of { O z  => O() | S y' => h x y' }
        | S x' => h x' y },
f = [x][y]case x of
        { O z  => O()
        | S x' => case y of { O z  => O() | S y' => h (g x' y) (f (S(S(x))) y') } },
g = [x][y]case x of
        { O z  => O()
        | S x' => case y of { O z  => O() | S y' => h (f x y) (g x' (S(y))) } };
"""


def test_combine():
    first = Call(0, 1, CallMatrix.from_rows(["<?", "?="]), (0, 1))
    second = Call(1, 2, CallMatrix.from_rows(["?="]), (1, 2))
    combined = combine(second, first)
    assert (combined.caller, combined.callee, combined.path) == (0, 2, (0, 1, 2))
    assert combined.matrix == CallMatrix.from_rows(["?="])
    with pytest.raises(ComposeMismatch):
        combine(first, second)


def test_graph_deduplicates_by_key_and_keeps_first_path():
    graph = CallGraph([function(0, 1), function(1, 1)])
    matrix = CallMatrix.from_rows(["<"])
    assert graph.add_edge(Call(0, 0, matrix, (0, 0)))
    assert not graph.add_edge(Call(0, 0, matrix, (0, 1, 0)))
    assert graph.edges[0].path == (0, 0)
    assert len(graph) == 1


def test_graph_checks_dimensions():
    graph = CallGraph([function(0, 2), function(1, 1)])
    with pytest.raises(DimensionMismatch):
        graph.add_edge(Call(0, 1, CallMatrix.from_rows(["<?", "?="]), (0, 1)))
    with pytest.raises(KeyError):
        graph.add_edge(Call(0, 5, CallMatrix.from_rows(["<?"]), (0, 5)))


def test_empty_graph_completes_to_itself():
    assert len(complete_graph(CallGraph())) == 0


def test_add_behaviour():
    assert diagonals(ADD, "add") == ["< ="]
    assert verdict(ADD, "add") == PassesWithOrder(TerminationOrder((0,)))


def test_ack_order():
    assert diagonals(ACK, "ack") == ["< ?", "= <"]
    assert verdict(ACK, "ack") == PassesWithOrder(TerminationOrder((0, 1)))


def test_flatten_mutual_recursion():
    graph, ids = graph_of(FLATTEN)
    f_loops = graph.self_edges(ids["f"])
    assert [(graph.path_names(c.path), c.matrix.render()) for c in f_loops] == [(["f", "g", "f"], "[<]")]
    assert diagonals(FLATTEN, "g") == ["< =", "? <"]
    assert str(verdict(FLATTEN, "g").order) == "1 0"


def test_merge_needs_two_step_calls():
    graph, ids = graph_of(MERGE)
    loops = graph.self_edges(ids["merge"])
    assert [" ".join(recursion_behaviour(graph, ids["merge"]).diagonals[i]) for i in range(3)] == [
        "= < =",
        "= = <",
        "= < <",
    ]
    assert [len(c.path) for c in loops] == [2, 2, 3]
    assert str(verdict(MERGE, "merge").order) == "1 2"


def test_zip_fails_with_three_self_edges():
    graph, ids = graph_of(ZIP)
    loops = graph.self_edges(ids["zip"])
    assert [c.matrix.render() for c in loops] == ["[?=][<?]", "[<?][?<]", "[?<][<?]"]
    assert sorted(" ".join(d) for d in recursion_behaviour(graph, ids["zip"]).diagonals) == ["< <", "? ?", "? ?"]
    assert verdict(ZIP, "zip") == Fails()


def test_completion_is_needed_to_detect_nontermination():
    assert diagonals(FGH, "h") == ["< <", "< =", "= <"]
    assert str(verdict(FGH, "h").order) == "0 1"
    assert diagonals(FGH, "f") == ["< =", "< ?", "? <", "? ?"]
    assert diagonals(FGH, "g") == ["< =", "< ?", "? <", "? ?"]
    assert verdict(FGH, "f") == Fails()
    assert verdict(FGH, "g") == Fails()


def test_no_recursion_passes():
    assert verdict("p = [x]case x of { O z => O z | S x' => x' };", "p") == PassesNoRecursion()
    assert verdict("one = S(O());", "one") == PassesNoRecursion()


def test_zero_arity_functions_are_never_recursive():
    graph, ids = graph_of("ones = Cons(HD=O(), TL=ones); c = c O();")
    assert len(graph) == 1
    assert graph.self_edges(ids["c"]) == []
    assert recursion_behaviour(graph, ids["ones"]).diagonals == []
    assert check_function(graph, ids["ones"]) == PassesNoRecursion()
    assert check_function(graph, ids["c"]) == PassesNoRecursion()


@pytest.mark.parametrize(
    "behaviour, arity, expected",
    [
        (rows("<="), 2, (0,)),
        (rows("?<"), 2, (1,)),
        (rows("=<", "<?"), 2, (0, 1)),
        (rows("?<", "<="), 2, (1, 0)),
        (rows("=<=", "==<", "=<<"), 3, (1, 2)),
        (rows("<??"), 3, (0,)),
        (rows("??", "<<"), 2, None),
        (rows("?"), 1, None),
        ([], 2, ()),
    ],
)
def test_find_termination_order(behaviour, arity, expected):
    order = find_termination_order(behaviour, arity)
    assert (order.indices if order else None) == expected


def test_order_rendering_and_extension():
    order = TerminationOrder((1, 0))
    assert str(order) == "1 0"
    assert TerminationOrder((2,)).extend(3) == (2, 0, 1)


def test_verify_order_def1():
    assert verify_order_def1(rows("=<", "<?"), (0, 1))
    assert not verify_order_def1(rows("=<", "<?"), (1, 0))
    assert not verify_order_def1(rows("=="), (0, 1))
    with pytest.raises(ValueError):
        verify_order_def1(rows("<<"), (0, 0))


def test_order_search_agrees_with_permutation_definition():
    for arity in range(4):
        vectors = list(itertools.product(Relation, repeat=arity))
        permutations = list(itertools.permutations(range(arity)))
        for count in range(4):
            for behaviour in itertools.combinations_with_replacement(vectors, count):
                order = find_termination_order(behaviour, arity)
                exists = any(verify_order_def1(behaviour, pi) for pi in permutations)
                assert (order is not None) == exists, behaviour
                if order is not None:
                    assert verify_order_def1(behaviour, order.extend(arity)), behaviour


@st.composite
def behaviours(draw):
    arity = draw(st.integers(0, 4))
    rows = draw(st.lists(st.tuples(*[st.sampled_from(list(Relation))] * arity), max_size=5))
    return rows, arity


@given(behaviours())
def test_adding_an_all_equal_row_never_creates_an_order(sample):
    rows, arity = sample
    if find_termination_order(rows, arity) is None:
        assert find_termination_order([*rows, (EQUAL,) * arity], arity) is None


@st.composite
def call_graphs(draw):
    arities = draw(st.lists(st.integers(0, 3), min_size=1, max_size=4))
    vertices = [function(i, a) for i, a in enumerate(arities)]
    edges = []
    for _ in range(draw(st.integers(0, 6))):
        caller = draw(st.integers(0, len(vertices) - 1))
        callee = draw(st.integers(0, len(vertices) - 1))
        cols, height = arities[caller], arities[callee]
        entries = []
        for _ in range(height):
            row = [UNKNOWN] * cols
            if cols and draw(st.booleans()):
                row[draw(st.integers(0, cols - 1))] = draw(st.sampled_from([LESS, EQUAL]))
            entries.append(tuple(row))
        edges.append(Call(caller, callee, CallMatrix(height, cols, tuple(entries)), (caller, callee)))
    return CallGraph(vertices, edges)


def closure_of_keys(graph):
    keys = set(graph.keys())
    while True:
        extra = {
            (a, c, matrix_multiply(m2, m1)) for (a, b, m1) in keys for (b2, c, m2) in keys if b == b2
        } - keys
        if not extra:
            return keys
        keys |= extra


@settings(max_examples=200, deadline=None)
@given(call_graphs())
def test_completion_matches_brute_force_and_is_idempotent(graph):
    completed = complete_graph(graph)
    assert completed.keys() == closure_of_keys(graph)
    assert complete_graph(completed).keys() == completed.keys()
    assert graph.keys() <= completed.keys()
    base_steps = {(c.caller, c.callee) for c in graph.edges}
    for call in completed.edges:
        assert set(itertools.pairwise(call.path)) <= base_steps
