import pytest
from hypothesis import given, strategies as st

from conftest import join_trees
from src.errors import InvalidStructureError
from src.order_core import NotLaminar, Poset


@pytest.fixture
def structured() -> Poset:
    """
    axis x0 < x1 < x2 < x3; u below x1; the line v0 < v1 hangs from x2 and w from v1.
    """
    covers = [("x0", "x1"), ("x1", "x2"), ("x2", "x3"), ("u", "x1"), ("v0", "v1"), ("v1", "x2"), ("w", "v1")]
    return Poset.from_covers(["x0", "x1", "x2", "x3", "u", "v0", "v1", "w"], covers)


@pytest.fixture
def two_below_one() -> Poset:
    """a < c < e, b < c and d < e"""
    return Poset.from_covers("abcde", [("a", "c"), ("b", "c"), ("c", "e"), ("d", "e")])


def test_directions_split_below_a_node(structured):
    assert set(structured.directions("x2")) == {frozenset({"x0", "x1", "u"}), frozenset({"v0", "v1", "w"})}
    assert structured.degree("x2") == 2
    assert structured.directions("x3") == (frozenset({"x0", "x1", "x2", "u", "v0", "v1", "w"}),)
    assert structured.degree("w") == 0


def test_directions_need_a_forest():
    diamond = Poset.from_covers("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    with pytest.raises(InvalidStructureError):
        diamond.directions("d")


def test_not_laminar(two_below_one):
    assert two_below_one.laminar_components("abc") == NotLaminar("a", "b", "c")


def test_laminar_components(two_below_one):
    assert two_below_one.laminar_components("acd") == (frozenset("ac"), frozenset("d"))
    assert two_below_one.laminar_components("ab") == (frozenset("a"), frozenset("b"))


def test_lines(path_abcr):
    assert path_abcr.is_line("abr")
    assert path_abcr.is_line("b")
    assert path_abcr.is_line("cr")
    assert not path_abcr.is_line("ar")
    assert not path_abcr.is_line("ac")
    assert not path_abcr.is_line("abc")


def test_joins(path_abcr, star):
    assert path_abcr.join("a", "b") == "b"
    assert path_abcr.join("a", "c") == "r"
    assert star.join("x", "y") == "c"
    assert star.join("z", "z") == "z"


def test_join_tree_examples(path_abcr, star):
    assert path_abcr.is_join_tree()
    assert star.is_join_tree()
    assert Poset([]).is_join_tree()
    antichain = Poset("ab")
    assert antichain.join("a", "b") is None
    assert antichain.is_join_forest()
    assert not antichain.is_join_tree()
    diamond = Poset.from_covers("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    assert not diamond.is_join_forest()


@given(join_trees(max_nodes=9))
def test_generated_trees_are_join_trees(p):
    assert p.is_join_tree()
    assert p.root() is not None


@given(join_trees(max_nodes=9), st.data())
def test_join_is_the_least_upper_bound(p, data):
    x = data.draw(st.sampled_from(p.nodes))
    y = data.draw(st.sampled_from(p.nodes))
    j = p.join(x, y)
    assert j is not None
    assert p.leq(x, j) and p.leq(y, j)
    for z in p.nodes:
        if p.leq(x, z) and p.leq(y, z):
            assert p.leq(j, z)
    assert p.join(y, x) == j


@given(join_trees(max_nodes=9), st.data())
def test_down_sets_are_closed_downwards(p, data):
    xs = data.draw(st.sets(st.sampled_from(p.nodes)))
    down = set(p.down_set(xs))
    assert set(xs) <= down
    for y in down:
        assert set(p.down(y)) <= down
    assert set(p.down_set(down)) == down


@given(join_trees(max_nodes=9), st.data())
def test_directions_are_classes_of_joins_below(p, data):
    x = data.draw(st.sampled_from(p.nodes))
    classes = p.directions(x)
    assert set().union(*classes) == set(p.strict_below(x))
    assert sum(len(c) for c in classes) == len(p.strict_below(x))
    for c in classes:
        for d in classes:
            for y in c:
                for z in d:
                    assert (c == d) == p.lt(p.join(y, z), x)
