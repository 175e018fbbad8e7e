"""
point oracles for the value of a (possibly infinite) term over F, F' or F''.

nodes are the Dewey words of ext occurrences. every predicate below walks the finite
path between two positions, so the oracles are exact on regular terms.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.arrangement import LazyArrangement, frontier, lex_compare
from src.errors import SortError, UnknownNodeError
from src.order_core import Poset
from src.term.automaton import State, TermAutomaton, pos_meet
from src.term.signature import EXT

Position = str
DOT = "dot"


class LazyStructuredTree:
    """
    the structured tree (or forest, or hedge) denoted by a term automaton.

    args:
        automaton: a validated automaton over one of the tree signatures
    """

    kind = "sj"

    def __init__(self, automaton: TermAutomaton):
        problems = automaton.validate()
        if problems:
            raise SortError(f"ill-sorted term: {problems[0]}")
        self.automaton = automaton
        sig = automaton.signature
        self.is_ext: Callable[[str], bool] = sig.is_ext
        ext_specs = [s for s in sig.specs if s.kind == EXT]
        if not ext_specs:
            raise SortError(f"signature {sig.name} has no ext symbol")
        self.tree_sort = ext_specs[0].sort
        self._paths: Dict[Position, Tuple[str, ...]] = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.automaton!r})"

    @property
    def sort(self) -> str:
        return "t" if self.automaton.root_sort == self.tree_sort else "f"

    # position helpers

    def _path(self, u: Position) -> Tuple[str, ...]:
        """symbols at u[:0], u[:1], ..., u."""
        if u not in self._paths:
            if not u:
                self._paths[u] = (self.automaton.symbol_of(self.automaton.root),)
            else:
                parent = self._path(u[:-1])
                q = self.automaton.state_at(u)
                self._paths[u] = parent + (self.automaton.symbol_of(q),)
        return self._paths[u]

    def symbol_at(self, u: Position) -> str:
        return self._path(u)[-1]

    def is_node(self, u: Position) -> bool:
        return self.automaton.is_position(u) and self.is_ext(self.symbol_at(u))

    def _require(self, u: Position) -> None:
        if not self.is_node(u):
            raise UnknownNodeError(u)

    @cached_property
    def _live(self) -> FrozenSet[State]:
        """states with an ext occurrence at or below them."""
        a = self.automaton
        live = {q for q in a.tau if self.is_ext(a.symbol_of(q))}
        changed = True
        while changed:
            changed = False
            for q, (_, sons) in a.tau.items():
                if q not in live and any(s in live for s in sons):
                    live.add(q)
                    changed = True
        return frozenset(live)

    def nodes(self, limit: Optional[int] = None) -> Iterator[Position]:
        """ext occurrences in breadth-first order."""
        a = self.automaton
        if a.root not in self._live:
            return
        count = 0
        queue = deque([("", a.root)])
        while queue:
            u, q = queue.popleft()
            if self.is_ext(a.symbol_of(q)):
                yield u
                count += 1
                if limit is not None and count >= limit:
                    return
            for i, s in enumerate(a.sons(q)):
                if s in self._live:
                    queue.append((u + str(i + 1), s))

    def is_finite(self) -> bool:
        a = self.automaton
        if a.root not in self._live:
            return True
        return not a.has_cycle(within=self._live)

    @cached_property
    def named(self) -> bool:
        """whether node names can serve as ids (finite term, every ext occurrence named once)."""
        a = self.automaton
        if not a.names or not self.is_finite():
            return False
        names = [a.names.get(a.state_at(u)) for u in self.nodes()]
        return None not in names and len(set(names)) == len(names)

    def node_id(self, u: Position) -> Hashable:
        if self.named:
            return self.automaton.name_at(u)
        return u

    # the equivalence and the order

    def _all_dot(self, u: Position, lo: int) -> bool:
        """every proper ancestor of u of length >= lo is a dot."""
        path = self._path(u)
        return all(path[k] == DOT for k in range(lo, len(u)))

    def approx(self, u: Position, v: Position) -> bool:
        """u and v lie on the same line: every position strictly above them up to their meet is a dot."""
        m, _, _ = pos_meet(u, v)
        return self._all_dot(u, len(m)) and self._all_dot(v, len(m))

    def leq(self, u: Position, v: Position) -> bool:
        """
        u <= v: v is an ancestor of u, or u lies below the first son of the meet m, v below the
        second one, and v is on the line of m.
        """
        self._require(u)
        self._require(v)
        m, du, dv = pos_meet(u, v)
        if dv is None:
            return True
        if du is None:
            return False
        return du == "1" and dv == "2" and self.symbol_at(m) == DOT and self._all_dot(v, len(m))

    def leq_by_witness(self, u: Position, v: Position) -> bool:
        """u <= v iff some ext ancestor-or-self w of u is on v's line and w <=lex v."""
        self._require(u)
        self._require(v)
        path = self._path(u)
        for k in range(len(u) + 1):
            w = u[:k]
            if self.is_ext(path[k]) and self.approx(w, v) and int(lex_compare(w, v)) <= 0:
                return True
        return False

    def lt(self, u: Position, v: Position) -> bool:
        return u != v and self.leq(u, v)

    def incomparable(self, u: Position, v: Position) -> bool:
        return not self.leq(u, v) and not self.leq(v, u)

    # lines

    def line_root(self, u: Position) -> Position:
        """the highest position reached from u through dots only."""
        path = self._path(u)
        k = len(u)
        while k > 0 and path[k - 1] == DOT:
            k -= 1
        return u[:k]

    def line_of(self, u: Position) -> LazyArrangement:
        self._require(u)
        return self.line_at(self.line_root(u))

    def line_at(self, root: Position, state_label: Optional[Callable[[State], Hashable]] = None) -> LazyArrangement:
        """
        the line whose dot-tree starts at root, as an arrangement.

        labels are node ids unless state_label (a labelling of ext states) is given.
        """
        return self._frontier(root, state_label)

    def _frontier(self, root: Position, state_label: Optional[Callable[[State], Hashable]]) -> LazyArrangement:
        w = frontier(self.automaton, root, self.is_ext, state_label)
        if state_label is not None:
            return w
        return LazyArrangement(w.positions, w.compare, self.node_id, None, None, w.is_finite())

    def max_ext_frontier(self, u: Position = "", state_label: Optional[Callable[[State], Hashable]] = None) -> LazyArrangement:
        """the maximal ext occurrences below u, in lexicographic order."""
        return self._frontier(u, state_label)

    def is_line_symbol(self, symbol: str) -> bool:
        """symbols that start a line below a forest-level position: tree-sorted and not Omega."""
        sig = self.automaton.signature
        return sig.spec(symbol).sort == self.tree_sort and not sig.is_omega(symbol)

    def lines_below(self, anchor: Position, state_label: Callable[[State], Hashable]) -> LazyArrangement:
        """the roots of the lines hanging from anchor (a son of an ext occurrence), in term order."""
        return frontier(self.automaton, anchor, self.is_line_symbol, state_label)

    def top(self, u: Position) -> Optional[Position]:
        """the nearest ext occurrence above the line of u, None on an axis."""
        self._require(u)
        root = self.line_root(u)
        path = self._path(root)
        for k in range(len(root) - 1, -1, -1):
            if self.is_ext(path[k]):
                return root[:k]
        return None

    def depth(self, u: Position) -> int:
        self._require(u)
        path = self._path(u)
        return sum(1 for k in range(len(u)) if self.is_ext(path[k]))

    def _line_roots_below(self, start: Position) -> Iterator[Position]:
        """tree-sorted positions reached from start through forest-level symbols."""
        a = self.automaton
        stack = [start]
        while stack:
            p = stack.pop()
            q = a.state_at(p)
            if q not in self._live:
                continue
            if a.sort_of(q) == self.tree_sort:
                yield p
                continue
            for i in range(len(a.sons(q)) - 1, -1, -1):
                stack.append(p + str(i + 1))

    def topped_lines(self, x: Position) -> Tuple[Tuple[Position, str], ...]:
        """(line root, son digit of x) for every line topped by x."""
        self._require(x)
        found = []
        for i in range(len(self.automaton.sons(self.automaton.state_at(x)))):
            digit = str(i + 1)
            found.extend((r, digit) for r in self._line_roots_below(x + digit))
        return tuple(found)

    def axis_roots(self) -> Tuple[Position, ...]:
        return tuple(self._line_roots_below(""))

    def join(self, u: Position, v: Position) -> Optional[Position]:
        """join through the top chains; None when u and v lie in different components."""
        chain_u, chain_v = self._top_chain(u), self._top_chain(v)
        entries_v = dict(chain_v)
        for root, eu in chain_u:
            if root in entries_v:
                ev = entries_v[root]
                return eu if self.leq(ev, eu) else ev
        return None

    def _top_chain(self, u: Position) -> List[Tuple[Position, Position]]:
        chain = []
        entry: Optional[Position] = u
        while entry is not None:
            chain.append((self.line_root(entry), entry))
            entry = self.top(entry)
        return chain

    # materialization

    def positions_below(self, depth: Optional[int]) -> List[Position]:
        if depth is None:
            if not self.is_finite():
                raise ValueError("an infinite value needs a depth bound")
            return list(self.nodes())
        return [u for u in self.nodes() if len(u) < depth] if self.is_finite() else self._bounded_nodes(depth)

    def _bounded_nodes(self, depth: int) -> List[Position]:
        return [u for u, q in self.automaton.positions(depth - 1) if self.is_ext(self.automaton.symbol_of(q))]

    def materialize(self, depth: Optional[int] = None):
        """the finite structured tree on the ext occurrences of length < depth (all of them when None)."""
        positions = self.positions_below(depth)
        ids = [self.node_id(u) for u in positions]
        n = len(positions)
        leq = np.zeros((n, n), dtype=bool)
        for i, u in enumerate(positions):
            for j, v in enumerate(positions):
                leq[i, j] = self.leq(u, v)
        groups: Dict[Position, List[Hashable]] = {}
        for u, x in zip(positions, ids):
            groups.setdefault(self.line_root(u), []).append(x)
        lines = [groups[r] for r in sorted(groups, key=lambda r: (len(r), r))]
        logger.debug(f"materialized {n} nodes in {len(lines)} lines (depth bound {depth})")
        return self._build(Poset.from_matrix(ids, leq), lines, positions, ids)

    def _build(self, poset: Poset, lines: Sequence[Sequence[Hashable]], positions: Sequence[Position], ids: Sequence[Hashable]):
        raise NotImplementedError

    def fgs(self) -> "LazyOrder":
        return LazyOrder(self.nodes, self.leq, self.join)


class LazyOrder:
    """a join-tree given by oracles: a fair node enumerator, the order and the join."""

    def __init__(
        self,
        nodes: Callable[[Optional[int]], Iterator[Hashable]],
        leq: Callable[[Hashable, Hashable], bool],
        join: Callable[[Hashable, Hashable], Optional[Hashable]],
    ):
        self._nodes = nodes
        self.leq = leq
        self.join = join

    def nodes(self, limit: Optional[int] = None) -> Iterator[Hashable]:
        return self._nodes(limit)

    def lt(self, x: Hashable, y: Hashable) -> bool:
        return x != y and self.leq(x, y)

    def incomparable(self, x: Hashable, y: Hashable) -> bool:
        return not self.leq(x, y) and not self.leq(y, x)

    def sample(self, k: int) -> Poset:
        """the restriction to the first k enumerated nodes."""
        picked = list(self.nodes(k))
        return Poset(picked, [(x, y) for x in picked for y in picked if self.leq(x, y)])
