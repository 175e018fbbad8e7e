"""
cut-rank over GF(2) and discrete rank-width of finite graphs by exhaustive search over layouts,
the unrooted trees of maximal degree 3 whose leaves are the vertices.

matrix rows are python ints used as bit vectors; graphs and layouts are networkx graphs.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger

from src.errors import InvalidStructureError, TooLargeError
from src.settings import get_settings

MAX_VERTICES = 64

Vertex = Hashable
Rows = Union[Sequence[int], Sequence[Sequence[int]], np.ndarray]


def make_graph(vertices: Iterable[Vertex] = (), edges: Iterable[Tuple[Vertex, Vertex]] = ()) -> nx.Graph:
    """an undirected graph without loops; parallel edges collapse."""
    g = nx.Graph()
    g.add_nodes_from(vertices)
    for u, v in edges:
        if u == v:
            raise InvalidStructureError("graphs have no loops", u)
        g.add_edge(u, v)
    if g.number_of_nodes() > MAX_VERTICES:
        raise TooLargeError(f"graphs are limited to {MAX_VERTICES} vertices, got {g.number_of_nodes()}")
    return g


def _as_bits(m: Rows) -> List[int]:
    rows = list(m)
    if not rows or isinstance(rows[0], (int, np.integer)):
        return [int(r) for r in rows]
    return [sum(1 << k for k, bit in enumerate(row) if int(bit) % 2) for row in rows]


def gf2_rank(m: Rows) -> int:
    """
    rank over GF(2) by gaussian elimination.

    args:
        m: rows as int bit vectors, or as 0/1 sequences

    returns:
        the rank, 0 for an empty matrix
    """
    pivots: Dict[int, int] = {}
    for row in _as_bits(m):
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


def _check_graph(g: nx.Graph) -> None:
    if nx.number_of_selfloops(g):
        raise InvalidStructureError("graphs have no loops", next(nx.selfloop_edges(g)))
    if g.number_of_nodes() > MAX_VERTICES:
        raise TooLargeError(f"graphs are limited to {MAX_VERTICES} vertices, got {g.number_of_nodes()}")


def cut_rank(g: nx.Graph, u: Iterable[Vertex], w: Iterable[Vertex]) -> int:
    """
    rank of the adjacency submatrix with rows u and columns w.

    raises:
        InvalidStructureError when u and w overlap or name unknown vertices
    """
    rows, cols = list(dict.fromkeys(u)), list(dict.fromkeys(w))
    overlap = set(rows) & set(cols)
    if overlap:
        raise InvalidStructureError("cut sides overlap", sorted(overlap, key=repr))
    missing = [x for x in rows + cols if x not in g]
    if missing:
        raise InvalidStructureError("unknown vertices", missing)
    column = {x: k for k, x in enumerate(cols)}
    bits = [sum(1 << column[y] for y in g.adj[x] if y in column) for x in rows]
    return gf2_rank(bits)


def is_layout(g: nx.Graph, t: nx.Graph) -> bool:
    """t is a tree of maximal degree 3 whose leaves are exactly the vertices of g."""
    if t.number_of_nodes() == 0:
        return g.number_of_nodes() == 0
    if not nx.is_tree(t) or max(d for _, d in t.degree) > 3:
        return False
    leaves = {x for x, d in t.degree if d <= 1}
    return leaves == set(g.nodes)


def layout_rank(g: nx.Graph, t: nx.Graph) -> int:
    """the maximal cut-rank over the two sides of every edge of the layout."""
    if not is_layout(g, t):
        raise InvalidStructureError("not a layout of the graph")
    best = 0
    vertices = set(g.nodes)
    for a, b in t.edges:
        side = nx.node_connected_component(_without_edge(t, a, b), a)
        inside = [x for x in g.nodes if x in side]
        outside = [x for x in g.nodes if x in vertices and x not in side]
        best = max(best, cut_rank(g, inside, outside))
    return best


def _without_edge(t: nx.Graph, a: Hashable, b: Hashable) -> nx.Graph:
    cut = t.copy()
    cut.remove_edge(a, b)
    return cut


def layout_count(n: int) -> int:
    """number of layouts on n labelled leaves: (2n - 5)!! from three leaves on."""
    count = 1
    for k in range(3, n):
        count *= 2 * k - 3
    return count


def enumerate_layouts(leaves: Sequence[Vertex]) -> Iterator[nx.Graph]:
    """
    every layout on the given leaves, each new leaf subdividing an edge of a smaller layout.

    internal nodes are named ("inner", k) where k is the index of the leaf that created them.
    """
    leaves = list(leaves)
    if len(leaves) <= 2:
        t = nx.Graph()
        t.add_nodes_from(leaves)
        if len(leaves) == 2:
            t.add_edge(*leaves)
        yield t
        return
    start = nx.Graph()
    centre = ("inner", 2)
    start.add_edges_from((centre, x) for x in leaves[:3])

    def grow(t: nx.Graph, k: int) -> Iterator[nx.Graph]:
        if k == len(leaves):
            yield t
            return
        for a, b in sorted(t.edges, key=repr):
            bigger = t.copy()
            middle = ("inner", k)
            bigger.remove_edge(a, b)
            bigger.add_edges_from([(a, middle), (middle, b), (middle, leaves[k])])
            yield from grow(bigger, k + 1)

    yield from grow(start, 3)


def discrete_rankwidth(g: nx.Graph, max_n: Optional[int] = None) -> Tuple[int, nx.Graph]:
    """
    the smallest rank of a layout of g, by exhaustive enumeration.

    args:
        g: a finite graph
        max_n: largest vertex count accepted, default from settings

    returns:
        (rank-width, a layout achieving it)

    raises:
        TooLargeError when g has more than max_n vertices
    """
    _check_graph(g)
    limit = get_settings().rankwidth_max_n if max_n is None else max_n
    n = g.number_of_nodes()
    if n > limit:
        raise TooLargeError(f"exhaustive layout search is limited to {limit} vertices, got {n}")
    best: Optional[Tuple[int, nx.Graph]] = None
    seen = 0
    for t in enumerate_layouts(list(g.nodes)):
        seen += 1
        r = layout_rank(g, t)
        if best is None or r < best[0]:
            best = (r, t)
            if r == 0:
                break
    logger.debug(f"rank-width {best[0]} after {seen} of {layout_count(n)} layouts")
    return best


def induced_subgraph(g: nx.Graph, vertices: Iterable[Vertex]) -> nx.Graph:
    return g.subgraph(list(vertices)).copy()


def induced_subgraphs(g: nx.Graph, min_size: int = 1) -> Iterator[nx.Graph]:
    """every induced subgraph with at least min_size vertices."""
    vertices = list(g.nodes)
    for k in range(min_size, len(vertices) + 1):
        for subset in combinations(vertices, k):
            yield induced_subgraph(g, subset)
