import pytest
from hypothesis import given, settings, strategies as st

from conftest import SBJ_EXAMPLE, SBJ_LOOP, binary_join_trees, f_terms
from src.arrangement import parse_expression, window
from src.errors import InvalidStructureError, SortError
from src.order_core import Poset
from src.scheme import Run, SBJScheme
from src.term import F, F_PRIME, dot, from_equations
from src.trees import (
    LazySBJTree,
    SBJTree,
    SEncoding,
    decode_S,
    encode_S,
    evaluate_sbj,
    fgs,
    omega_tree,
    op_concat,
    op_ext,
    split,
    structure,
    synthesize,
    val,
    validate_S,
)


@pytest.fixture
def example():
    return val(from_equations(SBJ_EXAMPLE, F))


@pytest.fixture
def example_lazy():
    return LazySBJTree(from_equations(SBJ_EXAMPLE, F))


@pytest.fixture
def loop():
    return val(from_equations(SBJ_LOOP, F))


def test_example_lines(example):
    assert isinstance(example, SBJTree)
    assert example.axis == tuple("fedca")
    assert {frozenset(line) for line in example.lines} == {frozenset(s) for s in ["fedca", "b", "hg", "i", "kj", "m"]}
    assert example.line_of("h") == ("h", "g")
    assert example.topped_lines("e") == (("h", "g"),)
    assert example.is_valid()


@pytest.mark.parametrize("x, y", [("i", "g"), ("g", "e"), ("m", "j"), ("j", "d"), ("f", "e"), ("d", "c"), ("i", "d")])
def test_example_order(example, x, y):
    assert example.lt(x, y)


def test_example_incomparable_nodes(example):
    assert example.incomparable("i", "j")
    assert example.join("i", "j") == "d"


def test_example_depths(example):
    assert example.depth("a") == 0
    assert example.depth("b") == 1
    assert example.depth("i") == 2
    assert example.depth("m") == 2


def test_example_oracles_on_positions(example_lazy):
    i, d, j = "121121", "122", "12212"
    assert example_lazy.leq(i, d)
    assert not example_lazy.leq(i, j) and not example_lazy.leq(j, i)
    assert example_lazy.line_root(j) == "1221"
    assert example_lazy.top(j) == d
    assert not example_lazy.is_node("1211")


@pytest.mark.parametrize("u, word", [("", tuple("fedca")), ("1", tuple("fed")), ("1211", tuple("hg"))])
def test_example_line_words(example_lazy, u, word):
    assert window(example_lazy.max_ext_frontier(u)).word == word


def test_example_underlying_tree(example):
    p = fgs(example)
    assert p.is_join_tree()
    assert p.root() == "a"


def test_example_synthesis_round_trip(example):
    assert val(synthesize(example)) == example


def test_example_encoding_round_trip(example):
    e = encode_S(example)
    assert e.n0 == frozenset("fedcaim")
    assert e.n1 == frozenset("bhgkj")
    assert validate_S(e) == []
    assert decode_S(e) == example


def test_example_split(example):
    lower, upper = split(example, 2)
    assert set(lower.nodes) == set("fehgi")
    assert upper.axis == tuple("dca")
    assert op_concat(lower, upper) == example


def test_evaluation_agrees_with_the_value(example):
    term = from_equations(SBJ_EXAMPLE, F).to_finite_term()
    assert evaluate_sbj(term).is_isomorphic(example)


# the loop t1 = ext(ext(Omega)) . t1


def test_loop_is_infinite(loop):
    assert isinstance(loop, LazySBJTree)
    assert not loop.is_finite()


def test_loop_incomparable_nodes(loop):
    a_, c_ = "11", "2211"
    assert loop.incomparable(a_, c_)
    assert loop.lt(a_, "221")
    assert loop.join(a_, c_) == "221"


def test_loop_tops_and_depths(loop):
    assert loop.top("2211") == "221"
    assert loop.depth("2211") == 1
    assert loop.top("221") is None


def test_loop_materialized_to_a_depth(loop):
    j = loop.materialize(10)
    axis = tuple("2" * k + "1" for k in range(9))
    assert j.axis == axis
    assert len(j) == 17
    assert all(j.topped_lines(x) == (("2" * k + "11",),) for k, x in enumerate(axis[:-1]))
    assert j.topped_lines(axis[-1]) == ()
    assert all(j.lt(a, b) for a, b in zip(axis, axis[1:]))
    assert j.is_valid()


def test_loop_axis_is_an_omega_word(loop):
    word = window(loop.max_ext_frontier(""), k=10).word
    assert word == tuple("2" * k + "1" for k in range(10))
    assert all(loop.top(u + "1") == u for u in word)
    assert all(loop.depth(u + "1") == 1 for u in word)


def test_loop_sample_is_a_join_tree(loop):
    p = loop.fgs().sample(4)
    assert len(p) == 4
    assert p.is_join_tree()


# a dense axis: t = t . (ext(t) . t)


@pytest.fixture
def dense():
    return val(from_equations("t = t . (ext(t) . t)", F))


def test_dense_axis_has_a_node_between_any_two(dense):
    assert not dense.is_finite()
    assert dense.top("21") is None and dense.top("121") is None
    assert dense.lt("121", "12221") and dense.lt("12221", "21")
    assert dense.lt("1121", "112221") and dense.lt("112221", "121")


def test_dense_join(dense):
    u, v = "21121", "121121"
    assert dense.top(u) == "21" and dense.top(v) == "121"
    assert dense.incomparable(u, v)
    assert dense.join(u, v) == "21"
    assert dense.lt(u, "21") and not dense.leq(v, u)


# an axis infinite in both directions: ...a a a . a a a...

BOTH_WAYS = "t = s . r\ns = s . ext(Omega)\nr = ext(Omega) . r"


def test_axis_infinite_both_ways():
    j = val(from_equations(BOTH_WAYS, F))
    assert j.materialize(4).axis == ("112", "12", "21", "221")
    assert j.lt("1112", "112") and j.lt("12", "21")
    assert j.top("1111112") is None


def test_two_sided_scheme_describes_the_value():
    scheme = SBJScheme("a", parse_expression("a^-w . a^w"), {"a": parse_expression("empty")})
    report = scheme.describes(val(from_equations(BOTH_WAYS, F)), Run.of_states(lambda q: "a"), bound=20)
    assert report.ok
    assert report.up_to_bound == 20


def test_two_sided_scheme_unfolds_on_both_sides():
    scheme = SBJScheme("ac", parse_expression("a^-w . a^w"), {"a": parse_expression("c"), "c": parse_expression("empty")})
    u = scheme.unfold(depth_bound=2, width_bound=20)
    assert not u.complete
    assert len(u.tree.axis) == 20
    assert len(u.tree) == 40
    assert {u.run.state(x) for x in u.tree.axis} == {"a"}
    sides = [x[0][0] for x in u.tree.axis]
    assert sides == sorted(sides) and set(sides) == {"1", "2"}
    report = u.describes()
    assert report.ok and report.up_to_bound == 2



# algebra laws


@given(f_terms())
def test_value_is_the_algebraic_evaluation(t):
    j = val(t)
    assert j == evaluate_sbj(t)
    assert j.is_valid()


@settings(max_examples=50)
@given(f_terms(depth=3), f_terms(depth=3))
def test_value_of_a_concatenation(t1, t2):
    assert val(dot(t1, t2)).is_isomorphic(op_concat(evaluate_sbj(t1), evaluate_sbj(t2)))


@given(f_terms(), st.data())
def test_split_then_concat(t, data):
    j = evaluate_sbj(t)
    k = data.draw(st.integers(0, len(j.axis)))
    assert op_concat(*split(j, k)) == j


@given(f_terms())
def test_synthesis_round_trip(t):
    j = evaluate_sbj(t)
    assert val(synthesize(j)) == j


@given(f_terms())
def test_encoding_round_trip(t):
    j = evaluate_sbj(t)
    assert decode_S(encode_S(j)) == j


def test_omega_is_neutral(example):
    assert op_concat(omega_tree(), example) is example
    assert op_concat(example, omega_tree()) is example


def test_ext_needs_a_fresh_node(example):
    with pytest.raises(InvalidStructureError):
        op_ext(example, "a")
    assert op_ext(example, "z").axis == ("z",)


def test_sbj_values_are_trees():
    with pytest.raises(SortError):
        SBJTree(Poset([]), [], sort="f")


def test_lazy_value_needs_a_term_over_f():
    with pytest.raises(SortError):
        LazySBJTree(from_equations("t = ext(Omega)", F_PRIME))


# structurings and the two-set encoding


@given(binary_join_trees(max_nodes=9))
def test_structure_binary_join_trees(p):
    j = structure(p)
    assert j.poset == p
    assert j.is_valid()


def test_structure_rejects_high_degree(star):
    with pytest.raises(InvalidStructureError):
        structure(star)


def test_structure_rejects_a_non_tree():
    with pytest.raises(InvalidStructureError):
        structure(Poset.from_covers("abc", [("a", "b"), ("a", "c")]))


def test_overlapping_sets_are_rejected(path_abcr):
    nodes = frozenset(path_abcr.nodes)
    assert validate_S(SEncoding(path_abcr, nodes, nodes))[0].reason == "sets overlap"


def test_odd_set_with_the_root_is_rejected(path_abcr):
    e = SEncoding(path_abcr, frozenset("ac"), frozenset("br"))
    assert validate_S(e)
    with pytest.raises(InvalidStructureError):
        decode_S(e)
