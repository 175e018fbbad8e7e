from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs
from src.errors import InvalidStructureError, TooLargeError
from src.rankwidth import (
    cut_rank,
    discrete_rankwidth,
    enumerate_layouts,
    gf2_rank,
    induced_subgraph,
    induced_subgraphs,
    is_layout,
    layout_count,
    layout_rank,
    make_graph,
)


def splits_oracle(g: nx.Graph) -> int:
    """
    rank-width by brute force over split systems: a layout is a set of n - 3 pairwise
    compatible non-trivial splits, and its rank is the largest cut-rank among them and the
    singletons.
    """
    vertices = list(g.nodes)
    n = len(vertices)
    if n <= 1:
        return 0
    singles = max(cut_rank(g, [v], [w for w in vertices if w != v]) for v in vertices)
    if n <= 3:
        return singles
    anchor = vertices[0]
    splits = []
    for k in range(2, n - 1):
        for side in combinations(vertices, k):
            if anchor in side:
                splits.append(frozenset(side))
    full = frozenset(vertices)

    def compatible(a, b):
        return not (a & b) or not (a - b) or not (b - a) or not (full - a - b)

    best = None
    for system in combinations(splits, n - 3):
        if all(compatible(a, b) for a, b in combinations(system, 2)):
            rank = max([singles] + [cut_rank(g, list(a), list(full - a)) for a in system])
            best = rank if best is None else min(best, rank)
    return best


def test_gf2_rank_examples():
    assert gf2_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert gf2_rank([[1, 1, 1]] * 4) == 1
    assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert gf2_rank([]) == 0
    assert gf2_rank([0b011, 0b110, 0b101]) == 2


@given(st.lists(st.integers(0, 255), max_size=8), st.data())
def test_gf2_rank_invariant_under_row_operations(rows, data):
    r = gf2_rank(rows)
    assert gf2_rank(list(reversed(rows))) == r
    if len(rows) >= 2:
        i, j = data.draw(st.lists(st.integers(0, len(rows) - 1), min_size=2, max_size=2, unique=True))
        updated = list(rows)
        updated[i] ^= updated[j]
        assert gf2_rank(updated) == r


def test_cut_rank_examples():
    k4 = nx.complete_graph(4)
    c5 = nx.cycle_graph(5)
    assert cut_rank(k4, [], [0, 1, 2, 3]) == 0
    assert cut_rank(k4, [0, 1], [2, 3]) == 1
    assert cut_rank(k4, [0], [1, 2, 3]) == 1
    assert cut_rank(c5, [0, 1], [2, 3, 4]) == 2


def test_cut_rank_rejects_overlap():
    with pytest.raises(InvalidStructureError):
        cut_rank(nx.path_graph(3), [0, 1], [1, 2])


@given(graphs(max_nodes=6), st.data())
def test_cut_rank_is_symmetric(g, data):
    u = data.draw(st.sets(st.sampled_from(list(g.nodes))))
    w = [x for x in g.nodes if x not in u]
    assert cut_rank(g, u, w) == cut_rank(g, w, u)


def test_layout_of_an_edge():
    g = nx.Graph([("a", "b")])
    (t,) = list(enumerate_layouts(["a", "b"]))
    assert is_layout(g, t)
    assert layout_rank(g, t) == 1


def test_edgeless_graph_has_rank_zero_layouts():
    g = make_graph(range(5))
    assert all(layout_rank(g, t) == 0 for t in enumerate_layouts(list(g.nodes)))


def test_caterpillar_layout_of_a_path():
    g = nx.path_graph(4)
    t = nx.Graph([("u", 0), ("u", 1), ("u", "v"), ("v", 2), ("v", 3)])
    assert is_layout(g, t)
    assert layout_rank(g, t) == 1


def test_invalid_layout_is_rejected():
    g = nx.path_graph(4)
    t = nx.Graph([("u", 0), ("u", 1), ("u", 2), ("u", 3)])
    assert not is_layout(g, t)
    with pytest.raises(InvalidStructureError):
        layout_rank(g, t)


@pytest.mark.parametrize("n", range(1, 8))
def test_layout_enumeration_count(n):
    layouts = list(enumerate_layouts(list(range(n))))
    assert len(layouts) == layout_count(n)
    g = make_graph(range(n))
    assert all(is_layout(g, t) for t in layouts)


def test_layout_count_is_a_double_factorial():
    assert [layout_count(n) for n in range(3, 8)] == [1, 3, 15, 105, 945]


@pytest.mark.parametrize(
    "g, expected",
    [(nx.complete_graph(4), 1), (nx.path_graph(4), 1), (nx.cycle_graph(5), 2)],
    ids=["K4", "P4", "C5"],
)
def test_small_rank_widths(g, expected):
    assert splits_oracle(g) == expected
    width, layout = discrete_rankwidth(g)
    assert width == expected
    assert is_layout(g, layout)
    assert layout_rank(g, layout) == width


@settings(max_examples=30)
@given(graphs(max_nodes=6))
def test_rank_width_matches_the_split_oracle(g):
    assert discrete_rankwidth(g)[0] == splits_oracle(g)


@settings(max_examples=50)
@given(graphs(max_nodes=6))
def test_rank_width_is_monotone_under_induced_subgraphs(g):
    width, layout = discrete_rankwidth(g)
    for h in induced_subgraphs(g):
        assert discrete_rankwidth(h)[0] <= width
    for t in enumerate_layouts(list(g.nodes)):
        assert layout_rank(g, t) >= width


def test_induced_subgraph_keeps_edges_inside():
    g = nx.cycle_graph(5)
    h = induced_subgraph(g, [0, 1, 2])
    assert set(map(frozenset, h.edges)) == {frozenset((0, 1)), frozenset((1, 2))}


def test_too_large_for_exhaustive_search():
    with pytest.raises(TooLargeError):
        discrete_rankwidth(nx.path_graph(5), max_n=4)


def test_loops_are_rejected():
    with pytest.raises(InvalidStructureError):
        make_graph(edges=[(1, 1)])
