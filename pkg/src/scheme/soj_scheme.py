"""
description schemes of SOJ-trees: a state carries two arrangements of directions, the minus
lines left of a node and the plus lines right of it.

sequences alternate points and slots; a slot is ("-", p) or ("+", p) with p a position of the
minus or plus arrangement of the state above, minus slots first.
"""
from __future__ import annotations

from functools import cmp_to_key
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from src.arrangement import Arrangement, FiniteArrangement, frontier
from src.errors import InvalidStructureError, SortError, UnknownNodeError
from src.order_core import Node, Poset
from src.term import F_SECOND, FiniteTerm, TermAutomaton, as_automaton
from src.trees import JoinHedge, LazySOJTree, LazyStructuredTree, SOJTree, StructuredForest

from .base import Direction, DescriptionScheme, Part, Run, State, settle, take, term_run

MINUS, PLUS = "-", "+"


class SOJScheme(DescriptionScheme):
    """
    (Q, D, w_Ax, (w_q-), (w_q+), (w_d)).

    args:
        states: Q
        directions: D
        axis: arrangement over Q
        minus, plus: q -> arrangement over D
        lines: d -> arrangement over Q
    """

    kind = "soj"

    def __init__(
        self,
        states: Iterable[State],
        directions: Iterable[Direction],
        axis: Arrangement,
        minus: Mapping[State, Arrangement],
        plus: Mapping[State, Arrangement],
        lines: Mapping[Direction, Arrangement],
    ):
        super().__init__(states, axis, directions)
        for q in self.states:
            if q not in minus or q not in plus:
                raise InvalidStructureError("state without minus and plus arrangements", q)
        missing = [d for d in self.directions if d not in lines]
        if missing:
            raise InvalidStructureError("direction without a word", missing[0])
        self.minus: Dict[State, Arrangement] = {q: minus[q] for q in self.states}
        self.plus: Dict[State, Arrangement] = {q: plus[q] for q in self.states}
        self.lines: Dict[Direction, Arrangement] = {d: lines[d] for d in self.directions}

    @classmethod
    def standard(cls, j: SOJTree) -> Tuple["SOJScheme", Run]:
        """Q = nodes, D = non-axis lines, w_x- and w_x+ the minus and plus lines topped by x in order."""
        if not isinstance(j, JoinHedge) or j.sort != "t":
            raise SortError("SOJ schemes describe SOJ-trees")
        axis = j.axis
        directions = [line for line in j.sorted_lines(j.lines) if line != axis]
        minus, plus = {}, {}
        for x in j.nodes:
            before, after = j.split_topped(x)
            minus[x], plus[x] = FiniteArrangement.simple(before), FiniteArrangement.simple(after)
        lines = {d: FiniteArrangement.simple(d) for d in directions}
        run = Run({x: x for x in j.nodes}, {frozenset(d): d for d in directions})
        return cls(j.nodes, directions, FiniteArrangement.simple(axis), minus, plus, lines), run

    @classmethod
    def of_term(
        cls,
        t: Union[FiniteTerm, TermAutomaton],
        h: Optional[Union[Mapping, Callable]] = None,
        h_dir: Optional[Union[Mapping, Callable]] = None,
    ) -> Tuple["SOJScheme", Run]:
        """
        the scheme read off a term over F'': w_q- and w_q+ are the line roots below the first and
        second sons of an ext2 state, w_d the ext frontier of a line root d.

        args:
            t: a finite term or term automaton over F''
            h, h_dir: optional maps on states and directions; the scheme is then quotiented by them
        """
        a = as_automaton(t, F_SECOND)
        lazy = LazySOJTree(a)
        if lazy.sort != "t":
            raise SortError("schemes describe trees, the term denotes a hedge")
        as_states = lambda q: q
        states = [q for q in a.reachable() if lazy.is_ext(a.symbol_of(q))]
        below = {
            (q, son): settle(frontier(a.rerooted(q), son, lazy.is_line_symbol, as_states)) for q in states for son in ("1", "2")
        }
        directions = list(dict.fromkeys(d for w in below.values() for d in w.labelled_set()))
        lines = {d: settle(frontier(a.rerooted(d), "", lazy.is_ext, as_states)) for d in directions}
        axis = settle(frontier(a, "", lazy.is_ext, as_states))
        scheme = cls(
            states,
            directions,
            axis,
            {q: below[q, "1"] for q in states},
            {q: below[q, "2"] for q in states},
            lines,
        )
        if h is not None or h_dir is not None:
            scheme = scheme.quotient(h if h is not None else as_states, h_dir)
        return scheme, term_run(lazy, h, h_dir)

    def line_word(self, d: Direction) -> Arrangement:
        try:
            return self.lines[d]
        except KeyError:
            raise UnknownNodeError(d) from None

    def _side(self, q: State, tag: str) -> Arrangement:
        if tag == MINUS:
            return self.minus[q]
        if tag == PLUS:
            return self.plus[q]
        raise UnknownNodeError(tag)

    def slots(self, q: State, width: int) -> List[Tuple[Any, Direction]]:
        out = []
        for tag in (MINUS, PLUS):
            w = self._side(q, tag)
            found, _ = take(w, width)
            out.extend(((tag, p), w.label_at(p)) for p in w.sort_positions(found))
        return out

    def slots_complete(self, q: State, width: int) -> bool:
        return take(self.minus[q], width)[1] and take(self.plus[q], width)[1]

    def slot_direction(self, q: State, slot: Any) -> Direction:
        try:
            tag, p = slot
        except (TypeError, ValueError):
            raise UnknownNodeError(slot) from None
        return self._side(q, tag).label_at(p)

    def _is_minus_slot(self, slot: Any) -> bool:
        return slot[0] == MINUS

    def compare_slots(self, q: State, s: Tuple[str, Any], s2: Tuple[str, Any]) -> int:
        """-1, 0 or 1 as slot s of state q comes before, at or after s2."""
        if s[0] != s2[0]:
            return -1 if s[0] == MINUS else 1
        return int(self._side(q, s[0]).compare(s[1], s2[1]))

    def seq_sqle(self, x: Tuple, y: Tuple) -> bool:
        """
        the total order on sequences: ancestors come after, lines on one side of a node are
        ordered by their slots, and a node's central direction lies between its minus and plus lines.
        """
        if self.seq_leq(x, y):
            return True
        if self.seq_leq(y, x):
            return False
        i = next(k for k in range(min(len(x), len(y))) if x[k] != y[k])
        if i % 2 == 1:
            q = self.walk(x)[i // 2][1]
            return self.compare_slots(q, x[i], y[i]) < 0
        w = self.walk(x)[i // 2][0]
        if int(w.compare(x[i], y[i])) < 0:
            # y sits in a line topped by y[:i+1], x in its central direction
            return y[i + 1][0] == PLUS
        return x[i + 1][0] == MINUS

    def expected_below(self, q: State) -> List[Tuple[str, Part]]:
        return [("minus", self.minus[q]), ("plus", self.plus[q])]

    def actual_below(self, j: StructuredForest, x: Node, run: Run) -> List[Tuple[str, Part]]:
        if not isinstance(j, JoinHedge):
            raise SortError("SOJ schemes describe SOJ-trees")
        before, after = j.split_topped(x)
        word = lambda lines: FiniteArrangement.from_word([run.direction(frozenset(line)) for line in lines])
        return [("minus", word(before)), ("plus", word(after))]

    def actual_below_lazy(self, lazy: LazyStructuredTree, u: str, run: Run) -> List[Tuple[str, Part]]:
        return [("minus", lazy.lines_below(u + "1", run.direction)), ("plus", lazy.lines_below(u + "2", run.direction))]

    def state_parts(self, q: State) -> List[Part]:
        return [self.minus[q], self.plus[q]]

    def assemble(self, states, axis, state_parts: Mapping, directions, direction_parts: Mapping) -> "SOJScheme":
        return SOJScheme(
            states,
            directions,
            axis,
            {q: parts[0] for q, parts in state_parts.items()},
            {q: parts[1] for q, parts in state_parts.items()},
            {d: parts[0] for d, parts in direction_parts.items()},
        )

    def build_tree(self, poset: Poset, lines: List[List[Tuple]], minus: List[List[Tuple]]) -> SOJTree:
        order = _sorted_by(poset.nodes, self.seq_sqle)
        return SOJTree(poset, lines, "t", order, minus)


def _sorted_by(nodes: Iterable[Tuple], sqle: Callable[[Tuple, Tuple], bool]) -> List[Tuple]:
    return sorted(nodes, key=cmp_to_key(lambda a, b: 0 if a == b else (-1 if sqle(a, b) else 1)))
