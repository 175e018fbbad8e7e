"""
description schemes of SJ-trees: a state carries the multiset of directions of the lines below
a node, a direction carries the word of such a line.
"""
from __future__ import annotations

from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from src.arrangement import OMEGA, Arrangement, FiniteArrangement, LabelledSet, frontier
from src.errors import InvalidStructureError, SortError, UnknownNodeError
from src.order_core import Node, Poset
from src.term import F_PRIME, FiniteTerm, TermAutomaton, as_automaton
from src.trees import LazySJTree, LazyStructuredTree, SJForest, StructuredForest

from .base import Direction, DescriptionScheme, Part, Run, State, settle, term_run


class SJScheme(DescriptionScheme):
    """
    (Q, D, w_Ax, (m_q), (w_d)).

    args:
        states: Q
        directions: D
        axis: arrangement over Q
        multisets: q -> labelled set over D, the directions of the lines topped by a node of state q
        lines: d -> arrangement over Q
    """

    kind = "sj"

    def __init__(
        self,
        states: Iterable[State],
        directions: Iterable[Direction],
        axis: Arrangement,
        multisets: Mapping[State, LabelledSet],
        lines: Mapping[Direction, Arrangement],
    ):
        super().__init__(states, axis, directions)
        for q in self.states:
            if q not in multisets:
                raise InvalidStructureError("state without a multiset", q)
            stray = [d for d in multisets[q] if d not in self._direction_set]
            if stray:
                raise InvalidStructureError("multiset uses an undeclared direction", (q, stray[0]))
        missing = [d for d in self.directions if d not in lines]
        if missing:
            raise InvalidStructureError("direction without a word", missing[0])
        self.multisets: Dict[State, LabelledSet] = {q: multisets[q] for q in self.states}
        self.lines: Dict[Direction, Arrangement] = {d: lines[d] for d in self.directions}

    @classmethod
    def standard(cls, j: SJForest) -> Tuple["SJScheme", Run]:
        """Q = nodes, D = non-axis lines, m_x = the lines topped by x, w_U = U itself."""
        if j.sort != "t":
            raise SortError("schemes describe trees")
        axis = j.axis
        directions = [line for line in j.lines if line != axis]
        multisets = {x: LabelledSet.of(j.topped_lines(x)) for x in j.nodes}
        lines = {d: FiniteArrangement.simple(d) for d in directions}
        run = Run({x: x for x in j.nodes}, {frozenset(d): d for d in directions})
        return cls(j.nodes, directions, FiniteArrangement.simple(axis), multisets, lines), run

    @classmethod
    def of_term(
        cls,
        t: Union[FiniteTerm, TermAutomaton],
        h: Optional[Union[Mapping, Callable]] = None,
        h_dir: Optional[Union[Mapping, Callable]] = None,
    ) -> Tuple["SJScheme", Run]:
        """
        the scheme read off a term over F': states are the ext states, directions the states at
        line roots, m_q counts the line roots below q and w_d is the ext frontier of d.

        args:
            t: a finite term or term automaton over F'
            h, h_dir: optional maps on states and directions; the scheme is then quotiented by them
        """
        a = as_automaton(t, F_PRIME)
        lazy = LazySJTree(a)
        as_states = lambda q: q
        states = [q for q in a.reachable() if lazy.is_ext(a.symbol_of(q))]
        multisets = {q: frontier(a.rerooted(q), "1", lazy.is_line_symbol, as_states).labelled_set() for q in states}
        directions = list(dict.fromkeys(d for q in states for d in multisets[q]))
        lines = {d: settle(frontier(a.rerooted(d), "", lazy.is_ext, as_states)) for d in directions}
        axis = settle(frontier(a, "", lazy.is_ext, as_states))
        scheme = cls(states, directions, axis, multisets, lines)
        if h is not None or h_dir is not None:
            scheme = scheme.quotient(h if h is not None else as_states, h_dir)
        return scheme, term_run(lazy, h, h_dir)

    def line_word(self, d: Direction) -> Arrangement:
        try:
            return self.lines[d]
        except KeyError:
            raise UnknownNodeError(d) from None

    def slots(self, q: State, width: int) -> List[Tuple[Any, Direction]]:
        return [(slot, slot[0]) for slot in self.multisets[q].elements(width)]

    def slots_complete(self, q: State, width: int) -> bool:
        return all(n != OMEGA and n <= width for _, n in self.multisets[q].items())

    def slot_direction(self, q: State, slot: Any) -> Direction:
        try:
            d, copy = slot
        except (TypeError, ValueError):
            raise UnknownNodeError(slot) from None
        n = self.multisets[q][d]
        if not isinstance(copy, int) or copy < 0 or copy >= n:
            raise UnknownNodeError(slot)
        return d

    def expected_below(self, q: State) -> List[Tuple[str, Part]]:
        return [("multiset", self.multisets[q])]

    def actual_below(self, j: StructuredForest, x: Node, run: Run) -> List[Tuple[str, Part]]:
        return [("multiset", LabelledSet.of(run.direction(frozenset(line)) for line in j.topped_lines(x)))]

    def actual_below_lazy(self, lazy: LazyStructuredTree, u: str, run: Run) -> List[Tuple[str, Part]]:
        return [("multiset", lazy.lines_below(u + "1", run.direction).labelled_set())]

    def state_parts(self, q: State) -> List[Part]:
        return [self.multisets[q]]

    def assemble(self, states, axis, state_parts: Mapping, directions, direction_parts: Mapping) -> "SJScheme":
        return SJScheme(
            states,
            directions,
            axis,
            {q: parts[0] for q, parts in state_parts.items()},
            {d: parts[0] for d, parts in direction_parts.items()},
        )

    def build_tree(self, poset: Poset, lines: List[List[Tuple]], minus: List[List[Tuple]]) -> SJForest:
        return SJForest(poset, lines, "t")
