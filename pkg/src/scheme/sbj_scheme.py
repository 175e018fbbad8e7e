"""
description schemes of SBJ-trees: each state carries the word of the single line below a node.
"""
from __future__ import annotations

from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from src.arrangement import Arrangement, FiniteArrangement, frontier
from src.errors import InvalidStructureError, SortError, UnknownNodeError
from src.order_core import Node, Poset
from src.term import F, FiniteTerm, TermAutomaton, as_automaton
from src.trees import LazySBJTree, LazyStructuredTree, SBJTree, StructuredForest

from .base import DescriptionScheme, Part, Run, State, is_empty, settle, term_run


class SBJScheme(DescriptionScheme):
    """
    (Q, w_Ax, (w_q)).

    args:
        states: Q
        axis: arrangement over Q
        words: q -> arrangement over Q, the line below a node of state q (empty for leaves)
    """

    kind = "sbj"
    slotted = False
    state_parts_over = "states"

    def __init__(self, states: Iterable[State], axis: Arrangement, words: Mapping[State, Arrangement]):
        super().__init__(states, axis)
        missing = [q for q in self.states if q not in words]
        if missing:
            raise InvalidStructureError("state without a word", missing[0])
        self.words: Dict[State, Arrangement] = {q: words[q] for q in self.states}

    @classmethod
    def standard(cls, j: SBJTree) -> Tuple["SBJScheme", Run]:
        """Q = nodes, w_Ax = the axis, w_x = the line topped by x; described through the identity run."""
        if j.sort != "t":
            raise SortError("schemes describe trees")
        words = {}
        for x in j.nodes:
            below = j.topped_lines(x)
            words[x] = FiniteArrangement.simple(below[0] if below else ())
        return cls(j.nodes, FiniteArrangement.simple(j.axis), words), Run({x: x for x in j.nodes})

    @classmethod
    def of_term(
        cls,
        t: Union[FiniteTerm, TermAutomaton],
        h: Optional[Union[Mapping, Callable]] = None,
    ) -> Tuple["SBJScheme", Run]:
        """
        the scheme read off a term over F: states are its ext states, w_Ax and w_q the ext frontiers
        below the root and below each ext state.

        args:
            t: a finite term or term automaton over F
            h: optional map on ext states; the scheme is then quotiented by it

        returns:
            (scheme, run); arrangements in the expression fragment become expressions, the others stay lazy
        """
        a = as_automaton(t, F)
        lazy = LazySBJTree(a)
        states = [q for q in a.reachable() if lazy.is_ext(a.symbol_of(q))]
        as_states = lambda q: q
        axis = frontier(a, "", lazy.is_ext, as_states)
        words = {q: frontier(a.rerooted(q), "1", lazy.is_ext, as_states) for q in states}
        scheme = cls(states, settle(axis), {q: settle(w) for q, w in words.items()})
        if h is not None:
            scheme = scheme.quotient(h)
        return scheme, term_run(lazy, h)

    def line_word(self, d: State) -> Arrangement:
        return self.words[d]

    def slots(self, q: State, width: int) -> List[Tuple[Any, State]]:
        return [] if is_empty(self.words[q]) else [(None, q)]

    def slots_complete(self, q: State, width: int) -> bool:
        return True

    def slot_direction(self, q: State, slot: Any) -> State:
        if slot is not None or q not in self.words:
            raise UnknownNodeError(slot)
        return q

    def expected_below(self, q: State) -> List[Tuple[str, Part]]:
        return [("line", self.words[q])]

    def actual_below(self, j: StructuredForest, x: Node, run: Run) -> List[Tuple[str, Part]]:
        word = [run.state(y) for line in j.topped_lines(x) for y in line]
        return [("line", FiniteArrangement.from_word(word))]

    def actual_below_lazy(self, lazy: LazyStructuredTree, u: str, run: Run) -> List[Tuple[str, Part]]:
        return [("line", lazy.line_at(u + "1", state_label=run.state))]

    def state_parts(self, q: State) -> List[Part]:
        return [self.words[q]]

    def assemble(self, states, axis, state_parts: Mapping, directions, direction_parts: Mapping) -> "SBJScheme":
        return SBJScheme(states, axis, {q: parts[0] for q, parts in state_parts.items()})

    def build_tree(self, poset: Poset, lines: List[List[Tuple]], minus: List[List[Tuple]]) -> SBJTree:
        return SBJTree(poset, lines)

