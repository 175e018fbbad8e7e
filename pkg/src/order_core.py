"""
finite partial orders, the join-tree and join-forest predicates, lines, directions,
laminar decompositions and line partitions (structurings).

orders are stored as a dense boolean reachability matrix: leq[i, j] is true iff
nodes[i] <= nodes[j]. every set-valued result is returned in canonical node order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from loguru import logger

from src.errors import InvalidStructureError, UnknownNodeError

Node = Hashable


def canonical(nodes: Iterable[Node]) -> Tuple[Node, ...]:
    """sort node ids; mixed id types fall back to sorting by repr."""
    items = list(nodes)
    try:
        return tuple(sorted(items))
    except TypeError:
        return tuple(sorted(items, key=repr))


def node_key(node: Node) -> Tuple[str, str]:
    return (type(node).__name__, repr(node))


@dataclass(frozen=True)
class Violation:
    """a failed condition, returned as a value by the validators."""

    reason: str
    witness: Any = None

    def __str__(self) -> str:
        return self.reason if self.witness is None else f"{self.reason}: {self.witness!r}"


@dataclass(frozen=True)
class NotLaminar:
    """three nodes x, y, z of a set X with [x,z] and [y,z] inside X but x and y incomparable."""

    x: Node
    y: Node
    z: Node


class Poset:
    """
    a finite partial order.

    args:
        nodes: node ids, unique
        pairs: pairs (a, b) meaning a <= b
        closed: when false the transitive closure of `pairs` is taken first
    """

    def __init__(self, nodes: Iterable[Node], pairs: Iterable[Tuple[Node, Node]] = (), closed: bool = True):
        given = list(nodes)
        self._nodes: Tuple[Node, ...] = canonical(set(given))
        if len(self._nodes) != len(given):
            raise InvalidStructureError("duplicate node ids")
        self._index: Dict[Node, int] = {x: i for i, x in enumerate(self._nodes)}
        n = len(self._nodes)
        leq = np.eye(n, dtype=bool)
        for a, b in pairs:
            leq[self.index(a), self.index(b)] = True
        if not closed:
            for k in range(n):
                leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        self._leq = leq
        self._check()
        self._leq.setflags(write=False)

    @classmethod
    def from_covers(cls, nodes: Iterable[Node], covers: Iterable[Tuple[Node, Node]]) -> "Poset":
        return cls(nodes, covers, closed=False)

    @classmethod
    def from_matrix(cls, nodes: Sequence[Node], leq: np.ndarray) -> "Poset":
        """build from a reachability matrix indexed like `nodes` (any order)."""
        order = canonical(nodes)
        where = {x: i for i, x in enumerate(nodes)}
        perm = [where[x] for x in order]
        matrix = np.asarray(leq, dtype=bool)[np.ix_(perm, perm)]
        poset = cls.__new__(cls)
        poset._nodes = order
        poset._index = {x: i for i, x in enumerate(order)}
        poset._leq = matrix.copy()
        poset._check()
        poset._leq.setflags(write=False)
        return poset

    def _check(self) -> None:
        m = self._leq
        n = len(self._nodes)
        if not m.diagonal().all():
            raise InvalidStructureError("relation is not reflexive")
        both = m & m.T & ~np.eye(n, dtype=bool)
        if both.any():
            i, j = np.argwhere(both)[0]
            raise InvalidStructureError("relation is not antisymmetric", (self._nodes[i], self._nodes[j]))
        composed = (m.astype(np.float32) @ m.astype(np.float32)) > 0
        missing = composed & ~m
        if missing.any():
            i, j = np.argwhere(missing)[0]
            raise InvalidStructureError("relation is not transitive", (self._nodes[i], self._nodes[j]))

    # basic access

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self._nodes

    @property
    def matrix(self) -> np.ndarray:
        return self._leq

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(self._nodes)

    def __contains__(self, node: object) -> bool:
        return node in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self._nodes == other._nodes and bool(np.array_equal(self._leq, other._leq))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Poset({len(self._nodes)} nodes, {len(self.covers())} covers)"

    def index(self, node: Node) -> int:
        try:
            return self._index[node]
        except (KeyError, TypeError):
            raise UnknownNodeError(node) from None

    def _pick(self, mask: np.ndarray) -> Tuple[Node, ...]:
        return tuple(self._nodes[i] for i in np.flatnonzero(mask))

    # order queries

    def leq(self, x: Node, y: Node) -> bool:
        return bool(self._leq[self.index(x), self.index(y)])

    def lt(self, x: Node, y: Node) -> bool:
        return x != y and self.leq(x, y)

    def incomparable(self, x: Node, y: Node) -> bool:
        return not self.leq(x, y) and not self.leq(y, x)

    def up_set(self, x: Node) -> Tuple[Node, ...]:
        """[x, +inf)"""
        return self._pick(self._leq[self.index(x)])

    def down(self, x: Node) -> Tuple[Node, ...]:
        """]-inf, x]"""
        return self._pick(self._leq[:, self.index(x)])

    def strict_below(self, x: Node) -> Tuple[Node, ...]:
        i = self.index(x)
        mask = self._leq[:, i].copy()
        mask[i] = False
        return self._pick(mask)

    def interval(self, x: Node, y: Node) -> Tuple[Node, ...]:
        """[x, y], empty unless x <= y"""
        return self._pick(self._leq[self.index(x)] & self._leq[:, self.index(y)])

    def down_set(self, xs: Iterable[Node]) -> Tuple[Node, ...]:
        mask = np.zeros(len(self._nodes), dtype=bool)
        for x in xs:
            mask |= self._leq[:, self.index(x)]
        return self._pick(mask)

    def join(self, x: Node, y: Node) -> Optional[Node]:
        """least upper bound of x and y, None when absent."""
        i, j = self.index(x), self.index(y)
        upper = np.flatnonzero(self._leq[i] & self._leq[j])
        for k in upper:
            if self._leq[k, upper].all():
                return self._nodes[k]
        return None

    def covers(self) -> Tuple[Tuple[Node, Node], ...]:
        return self._cover_pairs

    @cached_property
    def _cover_pairs(self) -> Tuple[Tuple[Node, Node], ...]:
        strict = self._leq & ~np.eye(len(self._nodes), dtype=bool)
        s = strict.astype(np.int32)
        cover = strict & ~((s @ s) > 0)
        return tuple((self._nodes[i], self._nodes[j]) for i, j in np.argwhere(cover))

    @cached_property
    def _cover_maps(self) -> Tuple[Dict[Node, List[Node]], Dict[Node, List[Node]]]:
        below: Dict[Node, List[Node]] = {x: [] for x in self._nodes}
        above: Dict[Node, List[Node]] = {x: [] for x in self._nodes}
        for a, b in self._cover_pairs:
            below[b].append(a)
            above[a].append(b)
        return below, above

    def children(self, x: Node) -> Tuple[Node, ...]:
        """nodes covered by x"""
        self.index(x)
        return tuple(self._cover_maps[0][x])

    def parent(self, x: Node) -> Optional[Node]:
        """the unique cover above x; None at a maximal node (join-forests only)."""
        self.index(x)
        above = self._cover_maps[1][x]
        if len(above) > 1:
            raise InvalidStructureError("node has several covers above it", (x, tuple(above)))
        return above[0] if above else None

    def maximal(self) -> Tuple[Node, ...]:
        strict_up = self._leq & ~np.eye(len(self._nodes), dtype=bool)
        return self._pick(~strict_up.any(axis=1))

    def root(self) -> Optional[Node]:
        tops = self.maximal()
        return tops[0] if len(tops) == 1 else None

    def restrict(self, subset: Iterable[Node]) -> "Poset":
        keep = [self.index(x) for x in subset]
        nodes = [self._nodes[i] for i in keep]
        return Poset.from_matrix(nodes, self._leq[np.ix_(keep, keep)])

    def hasse_digraph(self) -> nx.DiGraph:
        """covering pairs as a directed graph, edges pointing upwards."""
        g = nx.DiGraph()
        g.add_nodes_from(self._nodes)
        g.add_edges_from(self.covers())
        return g

    # tree predicates

    def is_join_forest(self) -> bool:
        for i in range(len(self._nodes)):
            up = self._leq[i]
            sub = self._leq[np.ix_(up, up)]
            if not (sub | sub.T).all():
                return False
        return True

    def is_join_tree(self) -> bool:
        """every up-set is a chain and every pair has a join; the empty order qualifies."""
        return self.is_join_forest() and len(self.maximal()) <= 1

    def join_classes(self) -> Tuple[FrozenSet[Node], ...]:
        """components of a join-forest: two nodes are together iff they have a join."""
        self._require_forest()
        return tuple(frozenset(self.down(top)) for top in self.maximal())

    def is_line(self, ys: Iterable[Node]) -> bool:
        members = [self.index(y) for y in ys]
        mask = np.zeros(len(self._nodes), dtype=bool)
        mask[members] = True
        sub = self._leq[np.ix_(members, members)]
        if not (sub | sub.T).all():
            return False
        for a in members:
            for b in members:
                between = self._leq[a] & self._leq[:, b]
                if (between & ~mask).any():
                    return False
        return True

    def directions(self, x: Node) -> Tuple[FrozenSet[Node], ...]:
        """classes of ]-inf, x[ under y ~ z iff y join z < x, one per child of x."""
        self._require_forest()
        return tuple(frozenset(self.down(c)) for c in self.children(x))

    def degree(self, x: Node) -> int:
        return len(self.directions(x))

    def laminar_components(self, xs: Iterable[Node]) -> Union[Tuple[FrozenSet[Node], ...], NotLaminar]:
        """
        the maximal lines included in xs when xs is laminar, else a violating triple.

        args:
            xs: the candidate set X

        returns:
            tuple of components in canonical order, or NotLaminar
        """
        members = canonical(set(xs))
        inside = set(members)

        def closed(a: Node, b: Node) -> bool:
            return set(self.interval(a, b)) <= inside

        for z in members:
            below = [x for x in members if self.leq(x, z) and closed(x, z)]
            for x in below:
                for y in below:
                    if self.incomparable(x, y):
                        return NotLaminar(x, y, z)
        parent: Dict[Node, Node] = {x: x for x in members}

        def find(a: Node) -> Node:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a in members:
            for b in members:
                if a != b and self.leq(a, b) and closed(a, b):
                    parent[find(a)] = find(b)
        groups: Dict[Node, List[Node]] = {}
        for x in members:
            groups.setdefault(find(x), []).append(x)
        components = sorted((frozenset(g) for g in groups.values()), key=lambda c: node_key(canonical(c)[0]))
        return tuple(components)

    def sorted_chain(self, ys: Iterable[Node]) -> Tuple[Node, ...]:
        """sort a linearly ordered subset increasingly."""
        items = list(ys)
        if not self.is_chain(items):
            raise InvalidStructureError("set is not linearly ordered", tuple(items))
        return tuple(sorted(items, key=lambda y: int(self._leq[:, self.index(y)].sum())))

    def is_chain(self, ys: Iterable[Node]) -> bool:
        idx = [self.index(y) for y in ys]
        sub = self._leq[np.ix_(idx, idx)]
        return bool((sub | sub.T).all())

    def _require_forest(self) -> None:
        if not self.is_join_forest():
            raise InvalidStructureError("order is not a join-forest")


class LinePartition:
    """
    a partition of the nodes into lines with the top of each line.

    the lines keep the order they were given in; line i is stored increasingly.
    two partitions are equal when they have the same set of lines.

    args:
        poset: the underlying join-forest
        lines: the blocks, each a linearly ordered convex set
    """

    def __init__(self, poset: Poset, lines: Iterable[Iterable[Node]]):
        self.poset = poset
        self.lines: Tuple[Tuple[Node, ...], ...] = tuple(poset.sorted_chain(line) for line in lines)
        self._line_of: Dict[Node, int] = {}
        for i, line in enumerate(self.lines):
            for x in line:
                if x in self._line_of:
                    raise InvalidStructureError("node lies in two lines", x)
                self._line_of[x] = i
        self.tops: Tuple[Optional[Node], ...] = tuple(poset.parent(line[-1]) if line else None for line in self.lines)
        self._depth: Dict[int, int] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinePartition):
            return NotImplemented
        return self.line_set() == other.line_set()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LinePartition({[list(line) for line in self.lines]})"

    def line_set(self) -> FrozenSet[FrozenSet[Node]]:
        return frozenset(frozenset(line) for line in self.lines)

    def line_of(self, x: Node) -> int:
        try:
            return self._line_of[x]
        except KeyError:
            raise UnknownNodeError(x) from None

    def line(self, x: Node) -> Tuple[Node, ...]:
        """U(x)"""
        return self.lines[self.line_of(x)]

    def top(self, index: int) -> Optional[Node]:
        return self.tops[index]

    def axes(self) -> Tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.tops) if t is None)

    def topped_by(self, x: Node) -> Tuple[int, ...]:
        """indices of the lines whose top is x (the family U^x)."""
        return tuple(i for i, t in enumerate(self.tops) if t == x)

    def u_minus(self, x: Node) -> Tuple[Node, ...]:
        """U_-(x): members of U(x) strictly below x"""
        line = self.line(x)
        return line[: line.index(x)]

    def u_plus(self, x: Node) -> Tuple[Node, ...]:
        line = self.line(x)
        return line[line.index(x) :]

    def depth_of_line(self, index: int) -> int:
        if index not in self._depth:
            chain = []
            current = index
            while self.tops[current] is not None:
                chain.append(current)
                current = self.line_of(self.tops[current])
                if current in chain:
                    raise InvalidStructureError("top-chain is cyclic", self.lines[current])
            depth = self._depth.get(current, 0)
            self._depth[current] = depth
            for i in reversed(chain):
                depth += 1
                self._depth[i] = depth
        return self._depth[index]

    def depth(self, x: Node) -> int:
        return self.depth_of_line(self.line_of(x))

    def validate(self) -> List[Violation]:
        """the structuring conditions: lines, partition, one upwards closed topless line per component."""
        poset = self.poset
        problems: List[Violation] = []
        if not poset.is_join_forest():
            return [Violation("underlying order is not a join-forest")]
        covered = set(self._line_of)
        if covered != set(poset.nodes):
            problems.append(Violation("lines do not cover the nodes", canonical(set(poset.nodes) - covered)))
        for line in self.lines:
            if not line:
                problems.append(Violation("empty line"))
            elif not poset.is_line(line):
                problems.append(Violation("block is not a line", line))
        for component in poset.join_classes():
            topless = [i for i in self.axes() if self.lines[i] and self.lines[i][0] in component]
            if len(topless) != 1:
                problems.append(Violation("component must have exactly one topless line", [self.lines[i] for i in topless]))
                continue
            axis = self.lines[topless[0]]
            if not set(poset.up_set(axis[0])) <= set(axis):
                problems.append(Violation("axis is not upwards closed", axis))
        if problems:
            logger.debug(f"line partition rejected: {problems[0]}")
        return problems

    def check(self) -> "LinePartition":
        problems = self.validate()
        if problems:
            raise InvalidStructureError(problems[0].reason, problems[0].witness)
        return self
