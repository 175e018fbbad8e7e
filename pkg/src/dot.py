"""
DOT rendering of structured trees, rooted quasi-trees, graphs and layouts. trees are drawn with
the root on top; edges inside a structuring line are bold.
"""
from typing import Hashable, Iterable, List, Optional

import networkx as nx

from src.order_core import Poset
from src.trees import JoinHedge, StructuredForest


def _quote(x: Hashable) -> str:
    text = str(x).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def _document(kind: str, name: str, body: Iterable[str]) -> str:
    rows = [f"{kind} {_quote(name)} {{"]
    rows += [f"  {row}" for row in body]
    rows.append("}")
    return "\n".join(rows) + "\n"


def structured_to_dot(j: StructuredForest, name: str = "tree") -> str:
    """cover edges top-down; same-line covers bold, axis nodes doubled, minus lines dashed."""
    body: List[str] = ["rankdir=BT;", "node [shape=circle];"]
    axis = {x for line in j.axes() for x in line}
    minus = {x for line in j.lines if isinstance(j, JoinHedge) and j.is_minus(line) for x in line}
    for x in j.nodes:
        shape = "doublecircle" if x in axis else "circle"
        body.append(f"{_quote(x)} [shape={shape}];")
    for a, b in j.poset.covers():
        attrs = []
        if j.line_of(a) == j.line_of(b):
            attrs.append("style=bold")
            attrs.append("penwidth=2.5")
        elif a in minus:
            attrs.append("style=dashed")
        body.append(f"{_quote(a)} -> {_quote(b)}" + (f" [{', '.join(attrs)}];" if attrs else ";"))
    if isinstance(j, JoinHedge) and j.order:
        body.append(f"// order: {' < '.join(map(str, j.order))}")
    return _document("digraph", name, body)


def poset_to_dot(p: Poset, name: str = "order", lines: Optional[Iterable[Iterable[Hashable]]] = None) -> str:
    body: List[str] = ["rankdir=BT;", "node [shape=circle];"]
    line_of = {}
    for k, line in enumerate(lines or ()):
        for x in line:
            line_of[x] = k
    for x in p.nodes:
        body.append(f"{_quote(x)};")
    for a, b in p.covers():
        bold = a in line_of and line_of.get(a) == line_of.get(b)
        body.append(f"{_quote(a)} -> {_quote(b)}" + (" [style=bold, penwidth=2.5];" if bold else ";"))
    return _document("digraph", name, body)


def graph_to_dot(g: nx.Graph, name: str = "graph") -> str:
    body = [f"{_quote(x)};" for x in g.nodes]
    body += [f"{_quote(u)} -- {_quote(v)};" for u, v in g.edges]
    return _document("graph", name, body)


def layout_to_dot(g: nx.Graph, t: nx.Graph, name: str = "layout", rank: Optional[int] = None) -> str:
    """leaves boxed with their vertex names, inner nodes as points."""
    body: List[str] = []
    if rank is not None:
        body.append(f"label={_quote(f'rank {rank}')};")
    for x in t.nodes:
        if x in g:
            body.append(f"{_quote(x)} [shape=box];")
        else:
            body.append(f"{_quote(x)} [shape=point, label=\"\"];")
    body += [f"{_quote(u)} -- {_quote(v)};" for u, v in t.edges]
    return _document("graph", name, body)
