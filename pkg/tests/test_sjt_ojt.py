import pytest
from hypothesis import given, settings

from conftest import join_trees, sj_terms, soj_terms
from src.errors import InvalidStructureError, SortError
from src.order_core import Poset
from src.term import F_PRIME, F_SECOND, from_equations
from src.trees import (
    JoinHedge,
    LazySOJTree,
    OJTree,
    SJForest,
    SOJTree,
    evaluate_sj,
    evaluate_soj,
    mkf,
    oj_global_from_local,
    oj_local_from_global,
    sj_apply,
    soj_apply,
    structure_forest,
    structure_ordered,
    val_sj,
    val_soj,
)

FAN = "t = ext[r](mkf(ext[a](Omega)) U+ mkf(ext[b](Omega)) U+ mkf(ext[c](Omega)))"
ORDERED_FORK = "t = ext2[u](mkh(ext2[a](Omega, Omega)), mkh(ext2[b](Omega, Omega)))"
ORDERED_CONCAT = "t = ext2[p](Omega, Omega) . ext2[q](mkh(ext2[l](Omega, Omega)), mkh(ext2[r](Omega, Omega)))"


# SJ-trees and forests


def test_sj_tree_of_unbounded_degree():
    j = val_sj(from_equations(FAN, F_PRIME))
    assert isinstance(j, SJForest)
    assert j.sort == "t"
    assert j.poset.degree("r") == 3
    assert j.axis == ("r",)
    assert all(j.incomparable(x, y) for x, y in [("a", "b"), ("b", "c"), ("a", "c")])
    assert j.is_valid()


def test_forest_value():
    j = val_sj(from_equations("f = mkf(ext[a](Omega)) U+ mkf(ext[b](Omega))", F_PRIME))
    assert j.sort == "f"
    assert len(j.axes()) == 2
    assert len(j.components()) == 2


@settings(max_examples=200)
@given(sj_terms())
def test_sj_value_is_the_algebraic_evaluation(t):
    assert val_sj(t) == evaluate_sj(t)


@given(sj_terms(sort="f"))
def test_sj_forest_value_is_the_algebraic_evaluation(t):
    j = val_sj(t)
    assert j == evaluate_sj(t)
    assert j.sort == "f"
    assert j.is_valid()


def test_mkf_needs_a_tree():
    forest = sj_apply("Omega_f")
    with pytest.raises(SortError):
        mkf(forest)
    assert mkf(sj_apply("Omega_t")).sort == "f"


def test_unknown_sj_operation():
    with pytest.raises(SortError):
        sj_apply("otimes")


def test_structure_a_forest():
    p = Poset.from_covers("abcd", [("a", "b"), ("c", "d")])
    j = structure_forest(p)
    assert j.sort == "f"
    assert {frozenset(a) for a in j.axes()} == {frozenset("ab"), frozenset("cd")}


@given(join_trees(max_nodes=9))
def test_structure_any_join_tree(p):
    j = structure_forest(p)
    assert j.poset == p
    assert j.is_valid()


# ordered join-trees


@given(join_trees(max_nodes=9))
def test_local_and_global_orders_round_trip(p):
    local = {x: p.children(x) for x in p.nodes}
    oj = oj_global_from_local(p, local)
    assert oj.validate() == []
    assert oj_local_from_global(oj) == local


def test_local_order_must_list_every_direction(star):
    with pytest.raises(InvalidStructureError):
        oj_global_from_local(star, {"c": ("x", "y")})


def test_root_first_order_is_rejected(path_abcr):
    oj = OJTree(path_abcr, ["r", "a", "b", "c"])
    assert oj.validate()[0].reason == "order puts a node after one of its ancestors"


def test_interleaved_directions_are_rejected():
    p = Poset.from_covers("abcdr", [("a", "b"), ("b", "r"), ("c", "d"), ("d", "r")])
    assert OJTree(p, ["a", "c", "b", "d", "r"]).validate()[0].reason == "order is not compatible with directions"


def test_ordered_fork():
    j = val_soj(from_equations(ORDERED_FORK, F_SECOND))
    assert isinstance(j, SOJTree)
    assert j.order == ("a", "b", "u")
    assert j.is_minus(("a",)) and not j.is_minus(("b",))
    assert j.uplus() == (("b",),)
    assert j.is_valid()
    assert oj_local_from_global(j.fgs()) == {"u": ("a", "b"), "a": (), "b": ()}


def test_ordered_concatenation():
    j = val_soj(from_equations(ORDERED_CONCAT, F_SECOND))
    assert j.axis == ("p", "q")
    assert j.order == ("l", "p", "r", "q")
    assert j.split_topped("q") == ([("l",)], [("r",)])


def test_lazy_order_oracle():
    lazy = LazySOJTree(from_equations(ORDERED_CONCAT, F_SECOND))
    p, q, l, r = "1", "2", "211", "221"
    assert lazy.sqlt(l, p) and lazy.sqlt(p, r) and lazy.sqlt(r, q)
    assert lazy.is_minus_root(l) and not lazy.is_minus_root(r)


@settings(max_examples=200)
@given(soj_terms())
def test_soj_value_is_the_algebraic_evaluation(t):
    j = val_soj(t)
    assert j == evaluate_soj(t)
    assert j.is_valid()


@given(soj_terms(sort="h"))
def test_hedge_value_is_the_algebraic_evaluation(t):
    j = val_soj(t)
    assert isinstance(j, JoinHedge)
    assert j == evaluate_soj(t)


def test_hedge_concatenation_keeps_the_order():
    h1 = soj_apply("mkh", evaluate_soj(from_equations(ORDERED_FORK, F_SECOND).to_finite_term()))
    h2 = soj_apply("mkh", soj_apply("ext2", soj_apply("Omega_h"), soj_apply("Omega_h"), "v"))
    h = soj_apply("otimes", h1, h2)
    assert h.sort == "h"
    assert h.order[-1] == "v"
    assert [len(c) for c in h.component_order()] == [3, 1]


@given(join_trees(max_nodes=8))
def test_structure_ordered_trees(p):
    oj = oj_global_from_local(p, {x: p.children(x) for x in p.nodes})
    j = structure_ordered(oj)
    assert j.fgs() == oj
    assert j.is_valid()


def test_structured_fork_has_no_minus_lines():
    oj = val_soj(from_equations(ORDERED_FORK, F_SECOND)).fgs()
    assert structure_ordered(oj).uminus() == ()


def test_ext2_needs_a_fresh_node():
    tree = soj_apply("ext2", soj_apply("Omega_h"), soj_apply("Omega_h"), "v")
    with pytest.raises(InvalidStructureError):
        soj_apply("ext2", soj_apply("mkh", tree), soj_apply("Omega_h"), "v")


# s on top of u (with y, y2 on its left and w on its right), then v (z left, z2 right), then b (l left, r right)
FOUR_FLOORS = (
    "t = ext2[s](Omega, Omega) . (ext2[u](mkh(ext2[y](Omega, Omega)) * mkh(ext2[y2](Omega, Omega)), mkh(ext2[w](Omega, Omega)))"
    " . (ext2[v](mkh(ext2[z](Omega, Omega)), mkh(ext2[z2](Omega, Omega)))"
    " . ext2[b](mkh(ext2[l](Omega, Omega)), mkh(ext2[r](Omega, Omega)))))"
)
FOUR_FLOORS_ORDER = ("l", "z", "y", "y2", "s", "w", "u", "z2", "v", "r", "b")


def _four_floors_by_operations() -> SOJTree:
    def leaf(name):
        return soj_apply("ext2", soj_apply("Omega_h"), soj_apply("Omega_h"), name)

    def hang(name):
        return soj_apply("mkh", leaf(name))

    u = soj_apply("ext2", soj_apply("otimes", hang("y"), hang("y2")), hang("w"), "u")
    v = soj_apply("ext2", hang("z"), hang("z2"), "v")
    b = soj_apply("ext2", hang("l"), hang("r"), "b")
    return soj_apply("dot", leaf("s"), soj_apply("dot", u, soj_apply("dot", v, b)))


def test_nested_concatenations_place_every_side_line():
    j = val_soj(from_equations(FOUR_FLOORS, F_SECOND))
    assert j == _four_floors_by_operations()
    assert j.axis == ("s", "u", "v", "b")
    assert j.order == FOUR_FLOORS_ORDER
    chain = ["z", "y", "y2", "s", "w", "u", "z2", "v"]
    assert all(j.sqlt(a, c) for a, c in zip(chain, chain[1:]))
    assert all(j.poset.lt(n, "u") for n in ["y", "y2", "w", "s"])
    assert all(j.poset.lt(n, "v") for n in ["z", "z2", "u"])
    assert j.poset.lt("v", "b")
    # l and r hang from b beside the axis
    assert j.poset.incomparable("l", "v") and j.poset.incomparable("r", "v")
    assert j.sqlt("l", "z") and j.sqlt("v", "r") and j.sqlt("r", "b")
    assert j.is_valid()


def test_nested_concatenations_as_local_direction_orders():
    j = val_soj(from_equations(FOUR_FLOORS, F_SECOND))
    local = {"b": ("l", "v", "r"), "v": ("z", "u", "z2"), "u": ("y", "y2", "s", "w")}
    assert oj_global_from_local(j.poset, local).order == FOUR_FLOORS_ORDER
    found = oj_local_from_global(j.fgs())
    assert {x: d for x, d in found.items() if d} == local


def test_nested_concatenations_lazily():
    lazy = LazySOJTree(from_equations(FOUR_FLOORS, F_SECOND))
    at = {"s": "1", "u": "21", "y": "21111", "y2": "21121", "w": "2121", "v": "221", "z": "22111", "z2": "22121"}
    at.update({"b": "222", "l": "22211", "r": "22221"})
    ranked = sorted(at, key=lambda n: sum(lazy.sqlt(at[m], at[n]) for m in at))
    assert tuple(ranked) == FOUR_FLOORS_ORDER
    assert lazy.leq(at["s"], at["u"]) and lazy.leq(at["z2"], at["b"])
    assert lazy.is_minus_root(at["l"]) and not lazy.is_minus_root(at["r"])
