from typing import List, Optional

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from src.order_core import Poset
from src.term import FiniteTerm, app, dot, ext, omega

settings.register_profile(
    "joinforest",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("joinforest")


@st.composite
def parent_arrays(draw, min_nodes: int = 1, max_nodes: int = 8, max_children: Optional[int] = None) -> List[int]:
    """parent[i] < i for i >= 1; node 0 is the root."""
    n = draw(st.integers(min_nodes, max_nodes))
    children = [0] * n
    parents = [-1]
    for i in range(1, n):
        open_nodes = [p for p in range(i) if max_children is None or children[p] < max_children]
        p = draw(st.sampled_from(open_nodes))
        children[p] += 1
        parents.append(p)
    return parents


def tree_from_parents(parents: List[int]) -> Poset:
    nodes = [f"n{i}" for i in range(len(parents))]
    return Poset.from_covers(nodes, [(f"n{i}", f"n{p}") for i, p in enumerate(parents) if p >= 0])


@st.composite
def join_trees(draw, min_nodes: int = 1, max_nodes: int = 8) -> Poset:
    return tree_from_parents(draw(parent_arrays(min_nodes, max_nodes)))


@st.composite
def binary_join_trees(draw, min_nodes: int = 1, max_nodes: int = 10) -> Poset:
    return tree_from_parents(draw(parent_arrays(min_nodes, max_nodes, max_children=2)))


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 6) -> nx.Graph:
    n = draw(st.integers(min_nodes, max_nodes))
    g = nx.Graph()
    g.add_nodes_from(range(n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for (u, v), keep in zip(pairs, draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))):
        if keep:
            g.add_edge(u, v)
    return g


@pytest.fixture
def path_abcr() -> Poset:
    """a < b < r and c < r"""
    return Poset.from_covers("abcr", [("a", "b"), ("b", "r"), ("c", "r")])


@pytest.fixture
def star() -> Poset:
    """x, y, z below c"""
    return Poset.from_covers("cxyz", [("x", "c"), ("y", "c"), ("z", "c")])


@st.composite
def f_terms(draw, depth: int = 4) -> FiniteTerm:
    """finite terms over F; ext occurrences are left unnamed."""
    choice = draw(st.integers(0, 2)) if depth > 0 else 0
    if choice == 0:
        return omega()
    if choice == 1:
        return dot(draw(f_terms(depth - 1)), draw(f_terms(depth - 1)))
    return ext(draw(f_terms(depth - 1)))


@st.composite
def sj_terms(draw, sort: str = "t", depth: int = 4) -> FiniteTerm:
    """well-sorted finite terms over F' of sort t or f."""
    choice = draw(st.integers(0, 2)) if depth > 0 else 0
    if sort == "t":
        if choice == 0:
            return omega("Omega_t")
        if choice == 1:
            return dot(draw(sj_terms("t", depth - 1)), draw(sj_terms("t", depth - 1)))
        return ext(draw(sj_terms("f", depth - 1)))
    if choice == 0:
        return omega("Omega_f")
    if choice == 1:
        return app("union", draw(sj_terms("f", depth - 1)), draw(sj_terms("f", depth - 1)))
    return app("mkf", draw(sj_terms("t", depth - 1)))


@st.composite
def soj_terms(draw, sort: str = "t", depth: int = 4) -> FiniteTerm:
    """well-sorted finite terms over F'' of sort t or h."""
    choice = draw(st.integers(0, 2)) if depth > 0 else 0
    if sort == "t":
        if choice == 0:
            return omega("Omega_t")
        if choice == 1:
            return dot(draw(soj_terms("t", depth - 1)), draw(soj_terms("t", depth - 1)))
        return app("ext2", draw(soj_terms("h", depth - 1)), draw(soj_terms("h", depth - 1)))
    if choice == 0:
        return omega("Omega_h")
    if choice == 1:
        return app("otimes", draw(soj_terms("h", depth - 1)), draw(soj_terms("h", depth - 1)))
    return app("mkh", draw(soj_terms("t", depth - 1)))


# axis f < e < d < c < a; lines hg and kj hang from e and d, i from g, m from j, b from c
SBJ_EXAMPLE = (
    "t = (ext[f](Omega) . (ext[e](ext[h](Omega) . ext[g](ext[i](Omega))) . ext[d](ext[k](Omega) . ext[j](ext[m](Omega)))))"
    " . (ext[c](ext[b](Omega)) . ext[a](Omega))"
)

# t1 = ext(ext(Omega)) . t1
SBJ_LOOP = "t1 = ext(ext(Omega)) . t1"
