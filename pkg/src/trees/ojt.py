"""
ordered join-trees, join-hedges and structured ordered join-trees (SOJ-trees): conversions
between the global order and the per-node direction orders, the algebra over F'' and the
value of terms over F''.

an order on nodes is stored as the tuple of nodes from least to greatest.
"""
from __future__ import annotations

from functools import cmp_to_key
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from loguru import logger

from src.errors import InvalidStructureError, SortError
from src.order_core import Node, Poset, Violation, canonical
from src.term import F_SECOND, FiniteTerm, TermAutomaton, as_automaton
from src.term.automaton import pos_meet

from .sbjt import greedy_structuring
from .structured import StructuredForest, _disjoint, concat_parts, root_above, union_parts
from .valuation import DOT, LazyStructuredTree, Position

LineSet = FrozenSet[FrozenSet[Node]]


class _OrderedMixin:
    """a total order on the nodes, kept as a sequence."""

    order: Tuple[Node, ...]

    def _set_order(self, order: Iterable[Node]) -> None:
        self.order = tuple(order)
        self._rank: Dict[Node, int] = {x: i for i, x in enumerate(self.order)}

    def rank(self, x: Node) -> int:
        return self._rank[x]

    def sqle(self, x: Node, y: Node) -> bool:
        return self._rank[x] <= self._rank[y]

    def sqlt(self, x: Node, y: Node) -> bool:
        return self._rank[x] < self._rank[y]

    def _order_violations(self, poset: Poset) -> List[Violation]:
        """the order must list every node once and satisfy (i) x <= y implies x before y and (ii) compatibility across directions."""
        if len(self.order) != len(poset) or set(self.order) != set(poset.nodes):
            return [Violation("order does not list every node exactly once", canonical(set(poset.nodes) ^ set(self.order)))]
        for x in poset.nodes:
            for y in poset.up_set(x):
                if self._rank[x] > self._rank[y]:
                    return [Violation("order puts a node after one of its ancestors", (x, y))]
        for m in poset.nodes:
            children = poset.children(m)
            blocks = [poset.down(c) for c in children]
            for i in range(len(blocks)):
                for j in range(i + 1, len(blocks)):
                    c, c2 = children[i], children[j]
                    before = self._rank[c] < self._rank[c2]
                    for y in blocks[i]:
                        for y2 in blocks[j]:
                            if (self._rank[y] < self._rank[y2]) != before:
                                return [Violation("order is not compatible with directions", (y, c, y2, c2))]
        return []


class OJTree(_OrderedMixin):
    """
    an ordered join-tree (or, with several components, an ordered join-forest).

    args:
        poset: the join-tree
        order: all nodes, least first under the total order
    """

    def __init__(self, poset: Poset, order: Iterable[Node]):
        self.poset = poset
        self._set_order(order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OJTree):
            return NotImplemented
        return self.poset == other.poset and self.order == other.order

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"OJTree({' '.join(map(str, self.order))})"

    @property
    def nodes(self) -> Tuple[Node, ...]:
        return self.poset.nodes

    def validate(self) -> List[Violation]:
        if not self.poset.is_join_forest():
            return [Violation("order is not a join-forest")]
        return self._order_violations(self.poset)

    def check(self) -> "OJTree":
        problems = self.validate()
        if problems:
            raise InvalidStructureError(problems[0].reason, problems[0].witness)
        return self

    def ordered_directions(self, x: Node) -> Tuple[Node, ...]:
        """the children of x (one per direction) in increasing order."""
        return tuple(sorted(self.poset.children(x), key=self.rank))


def oj_global_from_local(base: Poset, local: Mapping[Node, Sequence[Node]]) -> OJTree:
    """
    the total order derived from per-node direction orders.

    args:
        base: a join-tree or join-forest
        local: for each node, its children listed in the order of their directions;
            for a forest, local[None] orders the roots

    returns:
        OJTree whose order is the post-order of the ordered tree
    """
    if not base.is_join_forest():
        raise InvalidStructureError("order is not a join-forest")
    for x in base.nodes:
        children = list(base.children(x))
        given = list(local.get(x, ()))
        if sorted(map(repr, given)) != sorted(map(repr, children)):
            raise InvalidStructureError("direction order is not a total order on the directions", x)
    roots = list(base.maximal())
    if len(roots) > 1:
        given = list(local.get(None, ()))
        if sorted(map(repr, given)) != sorted(map(repr, roots)):
            raise InvalidStructureError("component order does not list the roots", canonical(roots))
        roots = given
    order: List[Node] = []

    def visit(x: Node) -> None:
        for c in local.get(x, ()):
            visit(c)
        order.append(x)

    for r in roots:
        visit(r)
    return OJTree(base, order)


def oj_local_from_global(j: OJTree) -> Dict[Node, Tuple[Node, ...]]:
    """per-node direction orders (each direction given by its child) of a valid ordered tree."""
    j.check()
    return {x: j.ordered_directions(x) for x in j.nodes}


# structured versions


class JoinHedge(_OrderedMixin, StructuredForest):
    """
    a structured join-hedge: join-forest, compatible total order and a structuring.

    args:
        poset: the join-forest
        lines: the structuring
        order: all nodes, least first
        minus: lines that hang left of their top (kept through mkh so that ext2 can restore them)
    """

    kind = "soj"
    _sort = "h"

    def __init__(
        self,
        poset: Poset,
        lines: Iterable[Iterable[Node]],
        sort: Optional[str] = None,
        order: Iterable[Node] = (),
        minus: Iterable[Iterable[Node]] = (),
    ):
        sort = self._sort if sort is None else sort
        if sort != self._sort:
            raise SortError(f"{type(self).__name__} values have sort {self._sort}")
        StructuredForest.__init__(self, poset, lines, sort)
        self._set_order(order)
        self.minus: LineSet = frozenset(frozenset(l) for l in minus)

    @classmethod
    def empty(cls, sort: Optional[str] = None):
        return cls(Poset([]), [])

    def _extra(self) -> Dict[str, Any]:
        return {"order": self.order, "minus": self.minus}

    def _relabel_extra(self, mapping: Callable[[Node], Node]) -> Dict[str, Any]:
        return {"order": tuple(mapping(x) for x in self.order), "minus": [[mapping(x) for x in l] for l in self.minus]}

    def restrict_to(self, subset: Iterable[Node], lines: Iterable[Iterable[Node]]):
        keep = set(subset)
        lines = [tuple(l) for l in lines]
        kept = {frozenset(l) for l in lines}
        return self.rebuild(
            self.poset.restrict(keep), lines, order=[x for x in self.order if x in keep], minus=[l for l in self.minus if l in kept]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JoinHedge):
            return NotImplemented
        return StructuredForest.__eq__(self, other) and self.order == other.order and self.minus == other.minus

    __hash__ = None  # type: ignore[assignment]

    def is_minus(self, line: Iterable[Node]) -> bool:
        return frozenset(line) in self.minus

    def uminus(self) -> Tuple[Tuple[Node, ...], ...]:
        return tuple(l for l in self.lines if self.is_minus(l))

    def uplus(self) -> Tuple[Tuple[Node, ...], ...]:
        axes = set(self.axes())
        return tuple(l for l in self.lines if not self.is_minus(l) and l not in axes)

    def sorted_lines(self, lines: Iterable[Tuple[Node, ...]]) -> List[Tuple[Node, ...]]:
        return sorted(lines, key=lambda line: self.rank(line[0]))

    def topped_in_order(self, x: Node) -> List[Tuple[Node, ...]]:
        return self.sorted_lines(self.lines[i] for i in self.structuring.topped_by(x))

    def central_split(self, x: Node) -> Tuple[List[Tuple[Node, ...]], List[Tuple[Node, ...]]]:
        """lines topped by x before and after its central direction (all after when there is none)."""
        lines = self.topped_in_order(x)
        central = self.structuring.u_minus(x)
        if not central:
            return [], lines
        pivot = self.rank(central[0])
        return [l for l in lines if self.rank(l[0]) < pivot], [l for l in lines if self.rank(l[0]) > pivot]

    def split_topped(self, x: Node) -> Tuple[List[Tuple[Node, ...]], List[Tuple[Node, ...]]]:
        """lines topped by x in the minus family, then those in the plus family, each in order."""
        lines = self.topped_in_order(x)
        return [l for l in lines if self.is_minus(l)], [l for l in lines if not self.is_minus(l)]

    def validate(self) -> List[Violation]:
        problems = StructuredForest.validate(self) or self._order_violations(self.poset)
        if problems:
            return problems
        if any(frozenset(a) in self.minus for a in self.axes()):
            return [Violation("an axis is in the minus family")]
        known = self.structuring.line_set()
        if not self.minus <= known:
            return [Violation("minus family holds a set that is not a line", [canonical(l) for l in self.minus - known])]
        for x in self.nodes:
            before, after = self.split_topped(x)
            if before and after and self.rank(before[-1][0]) > self.rank(after[0][0]):
                return [Violation("a minus line follows a plus line", x)]
            central = self.structuring.u_minus(x)
            if central:
                pivot = self.rank(central[0])
                if any(self.rank(l[0]) > pivot for l in before) or any(self.rank(l[0]) < pivot for l in after):
                    return [Violation("central direction is not between the minus and plus lines", x)]
        return []

    def node_code(self, x: Node) -> Tuple:
        before, after = self.split_topped(x)
        return (tuple(self.line_code(l) for l in before), tuple(self.line_code(l) for l in after))

    def component_order(self) -> Tuple[FrozenSet[Node], ...]:
        """the components, least first; each occupies a contiguous block of the order."""
        return tuple(sorted(self.poset.join_classes(), key=lambda c: min(self.rank(x) for x in c)))

    def canonical_code(self) -> Tuple:
        axes = self.axes()
        codes = []
        for comp in self.component_order():
            codes.append(self.line_code(next(a for a in axes if a[0] in comp)))
        return (self.sort, tuple(codes))

    def fgs(self) -> OJTree:
        return OJTree(self.poset, self.order)


class SOJTree(JoinHedge):
    """
    a structured ordered join-tree: an ordered join-tree whose non-axis lines are split into
    those left (minus) and right (plus) of their top.

    args:
        poset: the join-tree
        lines: the structuring, axis included
        order: all nodes, least first
        minus: the lines of the minus family; every other non-axis line is a plus line
    """

    _sort = "t"


SOJValue = Union[SOJTree, JoinHedge]


# the algebra


def _order_by(nodes: Iterable[Node], cmp: Callable[[Node, Node], int]) -> Tuple[Node, ...]:
    return tuple(sorted(nodes, key=cmp_to_key(cmp)))


def soj_concat(j1: SOJTree, j2: SOJTree) -> SOJTree:
    """
    concatenation along axes: nodes of j1 go below the axis of j2; a node of j1 precedes an
    incomparable node y of j2 iff the line of j2 below their join that leads to y is a plus line.
    """
    if len(j1) == 0:
        return j2
    if len(j2) == 0:
        return j1
    j1, j2, poset, lines = concat_parts(j1, j2)
    axis2 = set(j2.axis)
    side: Dict[Node, int] = {}
    for y in j2.nodes:
        if y in axis2:
            continue
        line = j2.line_of(y)
        while j2.top_of(line[0]) not in axis2:
            line = j2.line_of(j2.top_of(line[0]))
        side[y] = -1 if j2.is_minus(line) else 1
    left = set(j1.nodes)

    def cmp(x: Node, y: Node) -> int:
        if x == y:
            return 0
        if x in left and y in left:
            return j1.rank(x) - j1.rank(y)
        if x not in left and y not in left:
            return j2.rank(x) - j2.rank(y)
        if x in left:
            return -1 if y in axis2 or side[y] > 0 else 1
        return -cmp(y, x)

    order = _order_by(poset.nodes, cmp)
    return SOJTree(poset, lines, "t", order, list(j1.minus) + list(j2.minus))


def soj_ext(h1: JoinHedge, h2: JoinHedge, u: Node) -> SOJTree:
    """a new root u; the component axes of h1 hang on its minus side, those of h2 on its plus side."""
    h1, h2 = _disjoint(h1, h2)
    if u in h1 or u in h2:
        raise InvalidStructureError("fresh node id already used", u)
    _, _, poset, lines = union_parts(h1, h2)
    poset = root_above(poset, u)
    minus = list(h1.axes()) + list(h1.minus) + list(h2.minus)
    return SOJTree(poset, [(u,)] + lines, "t", h1.order + h2.order + (u,), minus)


def hedge_concat(h1: JoinHedge, h2: JoinHedge) -> JoinHedge:
    """horizontal concatenation: every node of h1 precedes every node of h2."""
    h1, h2, poset, lines = union_parts(h1, h2)
    return JoinHedge(poset, lines, "h", h1.order + h2.order, list(h1.minus) + list(h2.minus))


def mkh(j: SOJTree) -> JoinHedge:
    """read the tree as a one-component hedge; its axis is no longer distinguished."""
    return JoinHedge(j.poset, j.lines, "h", j.order, j.minus)


_OPERATIONS: Dict[str, Callable[..., SOJValue]] = {
    "dot": soj_concat,
    "ext2": soj_ext,
    "otimes": hedge_concat,
    "mkh": mkh,
    "Omega_t": lambda: SOJTree(Poset([]), []),
    "Omega_h": lambda: JoinHedge(Poset([]), []),
}


def soj_apply(op: str, *args) -> SOJValue:
    """
    apply an operation of the algebra.

    args:
        op: one of dot, otimes, ext2, mkh, Omega_t, Omega_h
        args: the operands; ext2 takes the two hedges then the fresh node id
    """
    if op not in _OPERATIONS:
        raise SortError(f"unknown operation {op!r} for SOJ values")
    return _OPERATIONS[op](*args)


def evaluate_soj(t: FiniteTerm, position: str = "") -> SOJValue:
    """bottom-up evaluation through the algebra, each ext2 named by its Dewey word."""
    sons = [evaluate_soj(c, position + str(i + 1)) for i, c in enumerate(t.children)]
    if t.symbol == "ext2":
        return soj_apply("ext2", sons[0], sons[1], position)
    return soj_apply(t.symbol, *sons)


# values of terms


class LazySOJTree(LazyStructuredTree):
    """the value of a regular term over F'' with the oracle for the total order."""

    kind = "soj"

    def __init__(self, automaton: TermAutomaton):
        if automaton.signature != F_SECOND:
            raise SortError(f"expected a term over F'', got {automaton.signature.name}")
        super().__init__(automaton)

    @property
    def sort(self) -> str:
        return "t" if self.automaton.root_sort == self.tree_sort else "h"

    def sqle(self, x: Position, y: Position) -> bool:
        """
        x before y: x <= y, or x and y incomparable and either their meet in the term is an
        otimes or ext with x under its first son and y under its second, or their meet is a dot
        and the side of the first ext below the meet on the second son's path decides.
        """
        if self.leq(x, y):
            return True
        if self.leq(y, x):
            return False
        m, dx, dy = pos_meet(x, y)
        if self.symbol_at(m) != DOT:
            return dx == "1" and dy == "2"
        if dx == "2":
            return not self.sqle(y, x)
        path = self._path(y)
        for k in range(len(m) + 1, len(y)):
            if self.is_ext(path[k]):
                return y[k] == "2"
        raise InvalidStructureError("incomparable nodes with no ext between the meet and the right node", (x, y))

    def sqlt(self, x: Position, y: Position) -> bool:
        return x != y and self.sqle(x, y)

    def is_minus_root(self, root: Position) -> bool:
        """whether the line starting at root hangs below the first son of its top."""
        path = self._path(root)
        for k in range(len(root) - 1, -1, -1):
            if self.is_ext(path[k]):
                return root[k] == "1"
        return False

    def _build(self, poset, lines, positions, ids):
        id_of = dict(zip(positions, ids))
        position_of = {x: u for u, x in id_of.items()}
        order = [id_of[u] for u in _order_by(positions, lambda a, b: 0 if a == b else (-1 if self.sqle(a, b) else 1))]
        minus = [l for l in lines if self.top(position_of[l[0]]) is not None and self.is_minus_root(self.line_root(position_of[l[0]]))]
        if self.sort == "h":
            return JoinHedge(poset, lines, "h", order, minus)
        return SOJTree(poset, lines, "t", order, minus)


def val_soj(t: Union[FiniteTerm, TermAutomaton]) -> Union[SOJValue, LazySOJTree]:
    lazy = LazySOJTree(as_automaton(t, F_SECOND))
    if lazy.is_finite():
        return lazy.materialize()
    return lazy


def structure_ordered(oj: OJTree, enumeration: Optional[Sequence[Node]] = None) -> SOJValue:
    """
    structure an ordered join-tree: any structuring of the base order, then each line topped by
    x goes to the minus family when it precedes the central direction of x, to the plus family
    otherwise (all of them when x has none). a forest yields a join-hedge.
    """
    oj.check()
    p = oj.poset
    enumeration = list(oj.order) if enumeration is None else list(enumeration)
    lines = greedy_structuring(p, enumeration)
    draft = JoinHedge(p, lines, "h", oj.order)
    minus = [l for x in p.nodes for l in draft.central_split(x)[0]]
    if len(p.maximal()) > 1:
        return JoinHedge(p, lines, "h", oj.order, minus).check()
    j = SOJTree(p, lines, "t", oj.order, minus)
    logger.debug(f"ordered structuring with {len(minus)} minus lines out of {len(lines)}")
    return j.check()
