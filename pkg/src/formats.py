"""
line-oriented text formats for posets, structured trees, betweenness relations, graphs and
description schemes. blank lines and `#` comments are ignored everywhere; node, state and
direction names are single tokens.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterator, List, Optional, Tuple

import networkx as nx
from loguru import logger

from src.arrangement import Arrangement, Empty, LabelledSet, parse_expression
from src.errors import FormatError, InvalidStructureError, JoinForestError
from src.order_core import Poset, canonical
from src.quasitree import Betweenness
from src.rankwidth import is_layout, make_graph
from src.scheme import DescriptionScheme, SBJScheme, SJScheme, SOJScheme
from src.scheme.base import part_text
from src.settings import get_settings
from src.trees import JoinHedge, SBJTree, SJForest, SOJTree, StructuredForest


def _records(text: str) -> Iterator[Tuple[int, List[str], str]]:
    """(line number, tokens, raw text without comment) for every non-empty line."""
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield n, body.split(), body


def _structure_error(e: JoinForestError, n: Optional[int] = None) -> FormatError:
    return FormatError(f"invalid structure: {e}", n)


# posets


def parse_poset(text: str) -> Poset:
    """
    `node x` declares a node, `x < y` an order pair; the order is the reflexive transitive closure.
    """
    nodes: List[str] = []
    pairs: List[Tuple[str, str]] = []
    for n, tokens, _ in _records(text):
        if tokens[0] == "node" and len(tokens) >= 2:
            nodes.extend(tokens[1:])
        elif len(tokens) == 3 and tokens[1] == "<":
            pairs.append((tokens[0], tokens[2]))
            nodes.extend((tokens[0], tokens[2]))
        else:
            raise FormatError(f"expected `node x` or `x < y`, got {' '.join(tokens)!r}", n)
    try:
        return Poset.from_covers(dict.fromkeys(nodes), pairs)
    except InvalidStructureError as e:
        raise _structure_error(e) from e


def write_poset(p: Poset) -> str:
    covers = p.covers()
    used = {x for pair in covers for x in pair}
    rows = [f"node {x}" for x in p.nodes if x not in used]
    rows += [f"{a} < {b}" for a, b in covers]
    return "\n".join(rows) + "\n"


# structured trees


def parse_structured(text: str) -> StructuredForest:
    """
    header `kind sbj|sj|soj` and optional `sort t|f|h`, then the order as `x < y` and
    `node x` records, the structuring as `line x1 x2 ...` (least first), and for SOJ-trees
    `order x1 x2 ...` (least first) and `minus x1 ...` naming lines of the minus family.
    """
    kind, sort = "sbj", None
    order_lines: List[str] = []
    lines: List[List[str]] = []
    order: List[str] = []
    minus: List[List[str]] = []
    for n, tokens, raw in _records(text):
        head, rest = tokens[0], tokens[1:]
        if head == "kind":
            if rest not in (["sbj"], ["sj"], ["soj"]):
                raise FormatError("kind is one of sbj, sj, soj", n)
            kind = rest[0]
        elif head == "sort":
            if rest not in (["t"], ["f"], ["h"]):
                raise FormatError("sort is one of t, f, h", n)
            sort = rest[0]
        elif head == "line":
            lines.append(rest)
        elif head == "order":
            order.extend(rest)
        elif head == "minus":
            minus.append(rest)
        else:
            order_lines.append(raw)
    for line in lines:
        order_lines.append("node " + " ".join(line))
        order_lines.extend(f"{a} < {b}" for a, b in zip(line, line[1:]))
    p = parse_poset("\n".join(order_lines))
    try:
        if kind == "sbj":
            j: StructuredForest = SBJTree(p, lines)
        elif kind == "sj":
            j = SJForest(p, lines, sort or ("t" if len(p.maximal()) <= 1 else "f"))
        elif (sort or "t") == "t":
            j = SOJTree(p, lines, "t", order, minus)
        else:
            j = JoinHedge(p, lines, "h", order, minus)
        j.check()
    except JoinForestError as e:
        raise _structure_error(e) from e
    logger.debug(f"parsed {kind} value with {len(j)} nodes and {len(j.lines)} lines")
    return j


def write_structured(j: StructuredForest) -> str:
    rows = [f"kind {j.kind}", f"sort {j.sort}"]
    rows += [f"{a} < {b}" for a, b in j.poset.covers()]
    rows += ["line " + " ".join(map(str, line)) for line in j.lines]
    if isinstance(j, JoinHedge):
        rows.append("order " + " ".join(map(str, j.order)))
        rows += ["minus " + " ".join(map(str, line)) for line in j.lines if j.is_minus(line)]
    return "\n".join(rows) + "\n"


# betweenness


def parse_betweenness(text: str, symmetric: bool = False) -> Betweenness:
    """
    `B x y z` records, plus `node x` for nodes in no triple.

    args:
        symmetric: also add B(z, y, x) for every listed triple
    """
    nodes: List[str] = []
    triples: List[Tuple[str, str, str]] = []
    for n, tokens, _ in _records(text):
        if tokens[0] == "B" and len(tokens) == 4:
            x, y, z = tokens[1:]
            triples.append((x, y, z))
            if symmetric:
                triples.append((z, y, x))
            nodes.extend((x, y, z))
        elif tokens[0] == "node" and len(tokens) >= 2:
            nodes.extend(tokens[1:])
        else:
            raise FormatError(f"expected `B x y z` or `node x`, got {' '.join(tokens)!r}", n)
    return Betweenness(dict.fromkeys(nodes), triples)


def write_betweenness(s: Betweenness) -> str:
    triples = sorted(s.triples(), key=repr)
    used = {x for t in triples for x in t}
    rows = [f"node {x}" for x in s.nodes if x not in used]
    rows += [f"B {x} {y} {z}" for x, y, z in triples]
    return "\n".join(rows) + "\n"


# graphs


def parse_graph(text: str) -> nx.Graph:
    """one edge `u v` per line; a single name is an isolated vertex."""
    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    for n, tokens, _ in _records(text):
        if len(tokens) == 1:
            vertices.append(tokens[0])
        elif len(tokens) == 2:
            if tokens[0] == tokens[1]:
                raise FormatError(f"loop at {tokens[0]!r}", n)
            vertices.extend(tokens)
            edges.append((tokens[0], tokens[1]))
        else:
            raise FormatError(f"expected `u v` or a single vertex, got {' '.join(tokens)!r}", n)
    try:
        return make_graph(dict.fromkeys(vertices), edges)
    except JoinForestError as e:
        raise _structure_error(e) from e


def write_graph(g: nx.Graph) -> str:
    rows = [str(x) for x in g.nodes if g.degree(x) == 0]
    rows += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(rows) + "\n"


def parse_layout(text: str, g: nx.Graph) -> nx.Graph:
    """a layout in edge-list form; its leaves must be the vertices of g."""
    t = nx.Graph()
    for n, tokens, _ in _records(text):
        if len(tokens) == 1:
            t.add_node(tokens[0])
        elif len(tokens) == 2:
            t.add_edge(tokens[0], tokens[1])
        else:
            raise FormatError(f"expected `u v` or a single node, got {' '.join(tokens)!r}", n)
    if not is_layout(g, t):
        raise FormatError("not a tree of maximal degree 3 whose leaves are the graph's vertices")
    return t


# schemes

_SCHEME_KINDS = ("sbj", "sj", "soj")


class _SchemeRecords:
    def __init__(self) -> None:
        self.kind: Optional[str] = None
        self.states: List[str] = []
        self.directions: List[str] = []
        self.axis: Optional[Arrangement] = None
        self.tables: Dict[str, Dict[str, object]] = {k: {} for k in ("word", "mset", "dir", "minus", "plus")}

    def note(self, table: str, key: str, value: object, n: int) -> None:
        if key in self.tables[table]:
            raise FormatError(f"{table} {key} is defined twice", n)
        self.tables[table][key] = value
        target = self.directions if table == "dir" else self.states
        target.append(key)


def _expression(raw: str, n: int) -> Arrangement:
    return parse_expression(raw.split("=", 1)[1], n)


def parse_scheme(text: str) -> DescriptionScheme:
    """
    records:
        kind sbj|sj|soj          (default from settings)
        state q ...              (states also follow from the records below)
        axis = <expr>
        word q = <expr>          SBJ: the line below a node of state q
        mset q = d1:3 d2:w       SJ: lines hanging below q, by direction
        dir d = <expr>           SJ/SOJ: the word of a line in direction d
        minus q = <expr>         SOJ: lines left of a node of state q
        plus q = <expr>          SOJ: lines right of a node of state q

    expressions use `empty`, letters, `.`, `^w`, `^-w` and `sh{...}`.
    """
    r = _SchemeRecords()
    for n, tokens, raw in _records(text):
        head = tokens[0]
        if head == "kind":
            if len(tokens) != 2 or tokens[1] not in _SCHEME_KINDS:
                raise FormatError("kind is one of sbj, sj, soj", n)
            r.kind = tokens[1]
        elif head == "state":
            r.states.extend(tokens[1:])
        elif head == "axis":
            if len(tokens) < 2 or tokens[1] != "=":
                raise FormatError("expected `axis = <expr>`", n)
            if r.axis is not None:
                raise FormatError("axis is defined twice", n)
            r.axis = _expression(raw, n)
        elif head in r.tables:
            if len(tokens) < 3 or tokens[2] != "=":
                raise FormatError(f"expected `{head} <name> = ...`", n)
            if head == "mset":
                value: object = LabelledSet.parse(raw.split("=", 1)[1])
            else:
                value = _expression(raw, n)
            r.note(head, tokens[1], value, n)
        else:
            raise FormatError(f"unknown record {head!r}", n)
    if r.axis is None:
        raise FormatError("scheme has no axis")
    kind = r.kind or get_settings().default_scheme_kind
    states = list(dict.fromkeys(r.states))
    directions = list(dict.fromkeys(r.directions))
    t = r.tables
    misplaced = {"sbj": ("mset", "dir", "minus", "plus"), "sj": ("word", "minus", "plus"), "soj": ("word", "mset")}[kind]
    for table in misplaced:
        if t[table]:
            raise FormatError(f"{table} records do not belong in a {kind} scheme")
    try:
        if kind == "sbj":
            scheme: DescriptionScheme = SBJScheme(states, r.axis, {q: t["word"].get(q, Empty()) for q in states})
        elif kind == "sj":
            multisets = {q: t["mset"].get(q, LabelledSet(())) for q in states}
            scheme = SJScheme(states, directions, r.axis, multisets, t["dir"])
        else:
            minus = {q: t["minus"].get(q, Empty()) for q in states}
            plus = {q: t["plus"].get(q, Empty()) for q in states}
            scheme = SOJScheme(states, directions, r.axis, minus, plus, t["dir"])
    except InvalidStructureError as e:
        raise _structure_error(e) from e
    logger.debug(f"parsed {scheme!r}")
    return scheme


def write_scheme(scheme: DescriptionScheme) -> str:
    """the record form of a scheme; arrangements are written in expression normal form."""
    rows = [f"kind {scheme.kind}", "state " + " ".join(map(str, scheme.states)), f"axis = {part_text(scheme.axis)}"]
    rows += _scheme_body(scheme)
    return "\n".join(rows) + "\n"


def _scheme_body(scheme: DescriptionScheme) -> List[str]:
    show: Callable[[object], str] = lambda part: part_text(part) if not isinstance(part, LabelledSet) else str(part)
    rows: List[str] = []
    if isinstance(scheme, SBJScheme):
        rows += [f"word {q} = {show(scheme.words[q])}" for q in scheme.states]
    elif isinstance(scheme, SJScheme):
        rows += [f"mset {q} = {show(scheme.multisets[q])}" for q in scheme.states]
        rows += [f"dir {d} = {show(scheme.lines[d])}" for d in scheme.directions]
    elif isinstance(scheme, SOJScheme):
        rows += [f"minus {q} = {show(scheme.minus[q])}" for q in scheme.states]
        rows += [f"plus {q} = {show(scheme.plus[q])}" for q in scheme.states]
        rows += [f"dir {d} = {show(scheme.lines[d])}" for d in scheme.directions]
    return rows


def write_listing(j: StructuredForest) -> str:
    """a readable listing: one row per line, least node first, with the top it hangs from."""
    rows = [f"{j.kind}-{'tree' if j.sort == 't' else 'value'} with {len(j)} nodes, {len(j.lines)} lines"]
    for line in sorted(j.lines, key=lambda l: (j.structuring.depth(l[0]), repr(canonical(l)))):
        top = j.top_of(line[0])
        tag = "axis" if top is None else f"below {top}"
        if isinstance(j, JoinHedge) and top is not None:
            tag += " (minus)" if j.is_minus(line) else " (plus)"
        rows.append(f"  {tag}: " + " < ".join(map(str, line)))
    return "\n".join(rows) + "\n"
