"""
structured binary join-trees: the algebra (concatenation along axes, ext, Omega), the
value of terms over F, greedy structurings, the two-set encoding and term synthesis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.errors import InvalidStructureError, SortError
from src.order_core import LinePartition, NotLaminar, Node, Poset, Violation, canonical
from src.term import F, FiniteTerm, TermAutomaton, as_automaton, dot, ext, omega

from .structured import StructuredForest, concat_trees, ext_forest, split_axis
from .valuation import LazyOrder, LazyStructuredTree


class SBJTree(StructuredForest):
    """a binary join-tree whose structuring has a degree <= 1 axis minimum and at most one line per top."""

    kind = "sbj"

    def __init__(self, poset: Poset, lines: Iterable[Iterable[Node]], sort: str = "t"):
        if sort != "t":
            raise SortError("SBJ values are trees")
        super().__init__(poset, lines, sort)

    def validate(self) -> List[Violation]:
        problems = super().validate()
        if problems:
            return problems
        for x in self.nodes:
            if self.poset.degree(x) > 2:
                problems.append(Violation("node has more than two directions", x))
            if len(self.structuring.topped_by(x)) > 1:
                problems.append(Violation("node is the top of several lines", x))
        axis = self.axis
        if axis and self.poset.degree(axis[0]) > 1:
            problems.append(Violation("least axis node has degree 2", axis[0]))
        return problems


class LazySBJTree(LazyStructuredTree):
    """the value of a regular term over F, nodes addressed by Dewey words."""

    kind = "sbj"

    def __init__(self, automaton: TermAutomaton):
        if automaton.signature != F:
            raise SortError(f"expected a term over F, got {automaton.signature.name}")
        super().__init__(automaton)

    def _build(self, poset, lines, positions, ids) -> SBJTree:
        return SBJTree(poset, lines)


SBJValue = Union[SBJTree, LazySBJTree]


def op_concat(j1: SBJTree, j2: SBJTree) -> SBJTree:
    return concat_trees(j1, j2)


def op_ext(j: SBJTree, u: Node) -> SBJTree:
    return ext_forest(j, u)


def omega_tree() -> SBJTree:
    return SBJTree.empty()


def split(j: SBJTree, k: int) -> Tuple[SBJTree, SBJTree]:
    """J1 holds the first k axis nodes and everything below them, J2 the rest."""
    return split_axis(j, k)


def val(t: Union[FiniteTerm, TermAutomaton]) -> SBJValue:
    """
    the SBJ-tree denoted by a term.

    args:
        t: a finite term or a term automaton over F

    returns:
        SBJTree for finite terms, LazySBJTree otherwise
    """
    lazy = LazySBJTree(as_automaton(t, F))
    if lazy.is_finite():
        return lazy.materialize()
    return lazy


def fgs(j: SBJValue) -> Union[Poset, LazyOrder]:
    return j.fgs()


def evaluate_sbj(t: FiniteTerm, position: str = "") -> SBJTree:
    """bottom-up evaluation through the algebra, each ext named by its Dewey word."""
    if t.symbol == "dot":
        return op_concat(evaluate_sbj(t.children[0], position + "1"), evaluate_sbj(t.children[1], position + "2"))
    if t.symbol == "ext":
        return op_ext(evaluate_sbj(t.children[0], position + "1"), position)
    if t.symbol == "Omega":
        return omega_tree()
    raise SortError(f"symbol {t.symbol!r} is not in F")


# structurings


def _greedy_lines(p: Poset, enumeration: Sequence[Node]) -> List[Tuple[Node, ...]]:
    rank = {x: i for i, x in enumerate(enumeration)}
    missing = set(p.nodes) - set(rank)
    if missing:
        raise InvalidStructureError("enumeration does not cover the nodes", canonical(missing))
    covered: set = set()
    lines: List[Tuple[Node, ...]] = []
    for x in sorted(p.nodes, key=lambda y: rank[y]):
        if x in covered:
            continue
        line = [x]
        y = p.parent(x)
        while y is not None and y not in covered:
            line.append(y)
            y = p.parent(y)
        y = x
        while True:
            free = [c for c in p.children(y) if c not in covered]
            if not free:
                break
            y = min(free, key=lambda c: rank[c])
            line.append(y)
        covered.update(line)
        lines.append(tuple(line))
    # axes first: start each component from its root
    roots = set(p.maximal())
    lines.sort(key=lambda line: 0 if roots & set(line) else 1)
    return lines


def greedy_structuring(p: Poset, enumeration: Sequence[Node]) -> List[Tuple[Node, ...]]:
    """greedy maximal lines, each component's axis taken first from its root downwards."""
    rank = {x: i for i, x in enumerate(enumeration)}
    roots = sorted(p.maximal(), key=lambda r: rank.get(r, len(rank)))
    return _greedy_lines(p, roots + [x for x in enumeration if x not in set(roots)])


def structure(p: Poset, enumeration: Optional[Sequence[Node]] = None) -> SBJTree:
    """
    an SBJ structuring of a binary join-tree: the axis runs from the root through first
    enumerated children, then each first uncovered node gets the maximal line through it.
    """
    if not p.is_join_tree():
        raise InvalidStructureError("order is not a join-tree")
    if any(p.degree(x) > 2 for x in p.nodes):
        raise InvalidStructureError("join-tree is not binary", [x for x in p.nodes if p.degree(x) > 2])
    enumeration = list(p.nodes) if enumeration is None else list(enumeration)
    j = SBJTree(p, greedy_structuring(p, enumeration))
    logger.debug(f"structured {len(p)} nodes into {len(j.lines)} lines")
    return j.check()


# the two-set encoding


@dataclass(frozen=True)
class SEncoding:
    """the order with the nodes split into even-depth (n0) and odd-depth (n1) lines."""

    poset: Poset
    n0: FrozenSet[Node]
    n1: FrozenSet[Node]


def encode_S(j: SBJTree) -> SEncoding:
    even = frozenset(x for x in j.nodes if j.depth(x) % 2 == 0)
    return SEncoding(j.poset, even, frozenset(j.nodes) - even)


def validate_S(e: SEncoding) -> List[Violation]:
    """
    check that (n0, n1) encodes a structuring.

    returns:
        the violations; an empty list means the components of n0 and n1 form a
        structuring whose encoding is e
    """
    p = e.poset
    if e.n0 & e.n1:
        return [Violation("sets overlap", canonical(e.n0 & e.n1))]
    if e.n0 | e.n1 != set(p.nodes):
        return [Violation("sets do not cover the nodes", canonical(set(p.nodes) - (e.n0 | e.n1)))]
    if not p.is_join_tree():
        return [Violation("order is not a join-tree")]
    parts: Dict[int, Tuple[FrozenSet[Node], ...]] = {}
    for side, members in ((0, e.n0), (1, e.n1)):
        comps = p.laminar_components(members)
        if isinstance(comps, NotLaminar):
            return [Violation(f"set {side} is not laminar", comps)]
        parts[side] = comps
    problems: List[Violation] = []
    topless = []
    side_of = {x: 0 for x in e.n0}
    side_of.update({x: 1 for x in e.n1})
    for side, comps in parts.items():
        for comp in comps:
            top = p.parent(p.sorted_chain(comp)[-1])
            if top is None:
                topless.append(comp)
                if side == 1:
                    problems.append(Violation("component of the odd set has no top", canonical(comp)))
            elif side_of[top] == side:
                problems.append(Violation("component top lies in the same set", canonical(comp)))
    if len(topless) != 1 and len(p):
        problems.append(Violation("exactly one component must be topless", [canonical(c) for c in topless]))
    if problems:
        return problems
    lines = list(parts[0]) + list(parts[1])
    return LinePartition(p, lines).validate()


def decode_S(e: SEncoding) -> SBJTree:
    problems = validate_S(e)
    if problems:
        raise InvalidStructureError(problems[0].reason, problems[0].witness)
    lines = [c for side in (e.n0, e.n1) for c in e.poset.laminar_components(side)]
    return SBJTree(e.poset, lines).check()


# synthesis


def _line_term(j: StructuredForest, line: Sequence[Node]) -> FiniteTerm:
    """right comb ext_{y1}(..) . (ext_{y2}(..) . (...)) over an increasing line."""
    terms = [ext(_below(j, y), name=str(y)) for y in line]
    result = terms[-1]
    for t in reversed(terms[:-1]):
        result = dot(t, result)
    return result


def _below(j: StructuredForest, x: Node) -> FiniteTerm:
    lines = j.topped_lines(x)
    return _line_term(j, lines[0]) if lines else omega()


def synthesize(j: SBJTree) -> FiniteTerm:
    """a term over F whose value is j, ext occurrences named by the node ids."""
    j.check()
    if len(j) == 0:
        return omega()
    return _line_term(j, j.axis)
