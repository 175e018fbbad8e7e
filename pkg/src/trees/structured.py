"""
finite structured join-forests: an order plus a line partition, with the operations the
three algebras share (concatenation along axes, ext under a new root, disjoint union,
splitting an axis) and canonical codes for isomorphism tests.
"""
from __future__ import annotations

from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Type, TypeVar

import networkx as nx
import numpy as np
from loguru import logger

from src.errors import InvalidStructureError, SortError
from src.order_core import LinePartition, Node, Poset, Violation, canonical, node_key

S = TypeVar("S", bound="StructuredForest")


class StructuredForest:
    """
    a finite join-forest with a structuring.

    args:
        poset: the order
        lines: the blocks of the structuring (or a LinePartition over poset)
        sort: "t" for trees (at most one component), "f" for forests
    """

    kind = "sj"

    def __init__(self, poset: Poset, lines: Iterable[Iterable[Node]], sort: str = "t"):
        self.poset = poset
        self.structuring = lines if isinstance(lines, LinePartition) else LinePartition(poset, lines)
        self.sort = sort

    # construction helpers

    @classmethod
    def empty(cls: Type[S], sort: str = "t") -> S:
        return cls(Poset([]), [], sort)

    @classmethod
    def from_parts(cls: Type[S], nodes: Sequence[Node], leq: np.ndarray, lines: Iterable[Iterable[Node]], sort: str = "t", **extra: Any) -> S:
        return cls(Poset.from_matrix(nodes, leq), lines, sort, **extra)

    def _extra(self) -> Dict[str, Any]:
        """constructor arguments beyond poset, lines and sort (overridden by ordered trees)."""
        return {}

    def rebuild(self: S, poset: Poset, lines: Iterable[Iterable[Node]], sort: Optional[str] = None, **extra: Any) -> S:
        args = self._extra()
        args.update(extra)
        return type(self)(poset, lines, self.sort if sort is None else sort, **args)

    # queries

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self.poset.nodes

    def __len__(self) -> int:
        return len(self.poset)

    def __contains__(self, x: object) -> bool:
        return x in self.poset

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructuredForest):
            return NotImplemented
        return type(self) is type(other) and self.poset == other.poset and self.structuring == other.structuring and self.sort == other.sort

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} nodes, {len(self.lines)} lines)"

    @property
    def lines(self) -> Tuple[Tuple[Node, ...], ...]:
        return self.structuring.lines

    def leq(self, x: Node, y: Node) -> bool:
        return self.poset.leq(x, y)

    def lt(self, x: Node, y: Node) -> bool:
        return self.poset.lt(x, y)

    def incomparable(self, x: Node, y: Node) -> bool:
        return self.poset.incomparable(x, y)

    def join(self, x: Node, y: Node) -> Optional[Node]:
        return self.poset.join(x, y)

    def axes(self) -> Tuple[Tuple[Node, ...], ...]:
        return tuple(self.lines[i] for i in self.structuring.axes())

    @property
    def axis(self) -> Tuple[Node, ...]:
        """the axis of a tree, increasing; empty for the empty tree."""
        axes = self.axes()
        if len(axes) > 1:
            raise InvalidStructureError("a forest has one axis per component", len(axes))
        return axes[0] if axes else ()

    def line_of(self, x: Node) -> Tuple[Node, ...]:
        return self.structuring.line(x)

    def top_of(self, x: Node) -> Optional[Node]:
        return self.structuring.top(self.structuring.line_of(x))

    def topped_lines(self, x: Node) -> Tuple[Tuple[Node, ...], ...]:
        """U^x, ordered by the canonical key of each line's least node."""
        found = [self.lines[i] for i in self.structuring.topped_by(x)]
        return tuple(sorted(found, key=lambda line: node_key(line[0])))

    def depth(self, x: Node) -> int:
        return self.structuring.depth(x)

    def fgs(self) -> Poset:
        return self.poset

    def components(self) -> Tuple["StructuredForest", ...]:
        parts = []
        for component in self.poset.join_classes():
            keep = [line for line in self.lines if line[0] in component]
            parts.append(self.restrict_to(component, keep))
        return tuple(parts)

    def restrict_to(self: S, subset: Iterable[Node], lines: Iterable[Iterable[Node]]) -> S:
        return self.rebuild(self.poset.restrict(subset), lines)

    # validity

    def validate(self) -> List[Violation]:
        problems = self.structuring.validate()
        if self.sort == "t" and len(self.poset.maximal()) > 1:
            problems.append(Violation("a tree has a single component", self.poset.maximal()))
        return problems

    def is_valid(self) -> bool:
        return not self.validate()

    def check(self: S) -> S:
        problems = self.validate()
        if problems:
            raise InvalidStructureError(problems[0].reason, problems[0].witness)
        return self

    # renaming

    def relabel(self: S, mapping: Callable[[Node], Node]) -> S:
        nodes = list(self.nodes)
        renamed = [mapping(x) for x in nodes]
        idx = [self.poset.index(x) for x in nodes]
        leq = self.poset.matrix[np.ix_(idx, idx)]
        lines = [[mapping(x) for x in line] for line in self.lines]
        return self.rebuild(Poset.from_matrix(renamed, leq), lines, **self._relabel_extra(mapping))

    def _relabel_extra(self, mapping: Callable[[Node], Node]) -> Dict[str, Any]:
        return {}

    # isomorphism

    def line_code(self, line: Sequence[Node]) -> Tuple:
        return tuple(self.node_code(y) for y in line)

    def node_code(self, x: Node) -> Tuple:
        """isomorphism type of J_x: the multiset of codes of the lines topped by x."""
        return tuple(sorted(self.line_code(line) for line in self.topped_lines(x)))

    def canonical_code(self) -> Tuple:
        return (self.sort, tuple(sorted(self.line_code(axis) for axis in self.axes())))

    def is_isomorphic(self, other: "StructuredForest") -> bool:
        return self.canonical_code() == other.canonical_code()

    def to_digraph(self) -> nx.DiGraph:
        """Hasse diagram with each cover edge marked by whether it stays inside a line."""
        g = self.poset.hasse_digraph()
        for a, b in g.edges:
            g.edges[a, b]["same_line"] = self.structuring.line_of(a) == self.structuring.line_of(b)
        return g


# shared algebra operations


def _disjoint(j1: S, j2: S) -> Tuple[S, S]:
    if set(j1.nodes) & set(j2.nodes):
        logger.debug("node sets overlap, tagging operands by side")
        return j1.relabel(lambda x: (0, x)), j2.relabel(lambda x: (1, x))
    return j1, j2


def _block(j1: StructuredForest, j2: StructuredForest) -> Tuple[List[Node], np.ndarray]:
    n1, n2 = list(j1.nodes), list(j2.nodes)
    m = np.zeros((len(n1) + len(n2), len(n1) + len(n2)), dtype=bool)
    m[: len(n1), : len(n1)] = j1.poset.matrix
    m[len(n1) :, len(n1) :] = j2.poset.matrix
    return n1 + n2, m


def concat_trees(j1: S, j2: S) -> S:
    """
    concatenation along axes: every node of j1 goes below every axis node of j2 and the two
    axes merge into one line. Omega (the empty tree) is neutral.
    """
    if j1.sort != "t" or j2.sort != "t":
        raise SortError("concatenation applies to trees")
    if len(j1) == 0:
        return j2
    if len(j2) == 0:
        return j1
    j1, j2, poset, lines = concat_parts(j1, j2)
    return j1.rebuild(poset, lines)


def concat_parts(j1: S, j2: S) -> Tuple[S, S, Poset, List[Tuple[Node, ...]]]:
    """the (possibly retagged) operands with the order and lines of their concatenation; the merged axis comes first."""
    j1, j2 = _disjoint(j1, j2)
    nodes, m = _block(j1, j2)
    axis1, axis2 = j1.axis, j2.axis
    offset = len(j1)
    cols = [offset + j2.nodes.index(a) for a in axis2]
    m[np.ix_(range(offset), cols)] = True
    lines = [axis1 + axis2] + [l for l in j1.lines if l != axis1] + [l for l in j2.lines if l != axis2]
    return j1, j2, Poset.from_matrix(nodes, m), lines


def ext_forest(forest: S, u: Node, sort_in: str = "t") -> S:
    """a new root u above every node; u alone forms the axis, old axes become lines topped by u."""
    if u in forest:
        raise InvalidStructureError("fresh node id already used", u)
    if forest.sort != sort_in:
        raise SortError(f"ext expects sort {sort_in}, got {forest.sort}")
    return forest.rebuild(root_above(forest.poset, u), [(u,)] + list(forest.lines), sort="t")


def root_above(poset: Poset, u: Node) -> Poset:
    """poset with a new greatest node u."""
    nodes = list(poset.nodes) + [u]
    n = len(nodes)
    m = np.zeros((n, n), dtype=bool)
    m[: n - 1, : n - 1] = poset.matrix
    m[:, n - 1] = True
    return Poset.from_matrix(nodes, m)


def union_forests(f1: S, f2: S) -> S:
    if f1.sort != "f" or f2.sort != "f":
        raise SortError("union applies to forests")
    f1, f2, poset, lines = union_parts(f1, f2)
    return f1.rebuild(poset, lines)


def union_parts(f1: S, f2: S) -> Tuple[S, S, Poset, List[Tuple[Node, ...]]]:
    f1, f2 = _disjoint(f1, f2)
    nodes, m = _block(f1, f2)
    return f1, f2, Poset.from_matrix(nodes, m), list(f1.lines) + list(f2.lines)


def split_axis(j: S, k: int) -> Tuple[S, S]:
    """
    cut the axis after its first k nodes: j1 is the down-set of the lower part A, j2 the rest;
    concat_trees(j1, j2) gives back j.
    """
    axis = j.axis
    if not 0 <= k <= len(axis):
        raise ValueError(f"cut {k} outside the axis of length {len(axis)}")
    lower = axis[:k]
    down = set(j.poset.down_set(lower))
    rest = [x for x in j.nodes if x not in down]

    def part(members: Iterable[Node], axis_part: Tuple[Node, ...]) -> S:
        members = list(members)
        member_set = set(members)
        lines = [axis_part] if axis_part else []
        lines += [l for l in j.lines if l != axis and l[0] in member_set]
        return j.restrict_to(members, lines)

    return part(canonical(down), lower), part(rest, axis[k:])
