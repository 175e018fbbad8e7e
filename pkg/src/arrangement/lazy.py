"""
lazy arrangements: comparison and labelling oracles over an address set that is enumerated
breadth-first. frontier() builds one from a term automaton; such arrangements also keep
their automaton so that letter counts, finiteness and end points stay decidable.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx
from loguru import logger

from src.errors import NeedsExpressionError, PositionError, UnknownNodeError
from src.term.automaton import State, TermAutomaton

from .base import Address, Arrangement, Letter, Ordering, lex_compare
from .finite import FiniteArrangement
from .labelled_set import OMEGA, LabelledSet

WINDOW_SEARCH_BUDGET = 100_000


@dataclass(frozen=True)
class FrontierSource:
    """
    the automaton behind a frontier arrangement.

    args:
        automaton: the term
        state: state at the anchor position
        is_letter: which symbols are frontier letters (descent stops there)
        state_label: label of a letter occurrence, as a function of its state
    """

    automaton: TermAutomaton
    state: State
    is_letter: Callable[[str], bool]
    state_label: Callable[[State], Letter]

    def relabelled(self, r: Callable[[Letter], Letter]) -> "FrontierSource":
        inner = self.state_label
        return FrontierSource(self.automaton, self.state, self.is_letter, lambda q: r(inner(q)))

    def letter_state(self, q: State) -> bool:
        return self.is_letter(self.automaton.symbol_of(q))

    @cached_property
    def productive(self) -> FrozenSet[State]:
        return self.automaton.productive(self.is_letter)

    def live_sons(self, q: State) -> Tuple[State, ...]:
        if self.letter_state(q):
            return ()
        return tuple(s for s in self.automaton.sons(q) if s in self.productive)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """productive states reachable from the anchor, edges towards sons."""
        g = nx.DiGraph()
        if self.state not in self.productive:
            return g
        g.add_node(self.state)
        queue = deque([self.state])
        while queue:
            q = queue.popleft()
            for s in self.live_sons(q):
                if s not in g:
                    queue.append(s)
                g.add_edge(q, s)
        return g

    @cached_property
    def cyclic(self) -> FrozenSet[State]:
        g = self.graph
        on_cycle: Set[State] = {q for q in g if g.has_edge(q, q)}
        for component in nx.strongly_connected_components(g):
            if len(component) > 1:
                on_cycle |= component
        return frozenset(on_cycle)

    def is_finite(self) -> bool:
        return not self.cyclic

    def letters(self) -> FrozenSet[Letter]:
        return frozenset(self.state_label(q) for q in self.graph if self.letter_state(q))

    def end(self, last: bool) -> Tuple[bool, Optional[Letter]]:
        """(exists, label) of the least (or greatest) letter occurrence."""
        q = self.state
        if q not in self.productive:
            return False, None
        seen: Set[State] = set()
        while not self.letter_state(q):
            if q in seen:
                return False, None
            seen.add(q)
            sons = self.live_sons(q)
            q = sons[-1] if last else sons[0]
        return True, self.state_label(q)

    def expression(self):
        """
        an equivalent regular expression, or None.

        every cycle of the frontier graph must be a simple left or right spine: q = u . q gives
        u^w and q = q . u gives u^-w. shuffles and branching cycles are not recognised.
        """
        from .expression import Concat, Empty, Letter, OmegaPower, OmegaRevPower

        g = self.graph
        if not len(g):
            return Empty()
        component: Dict[State, FrozenSet[State]] = {}
        for comp in nx.strongly_connected_components(g):
            for q in comp:
                component[q] = frozenset(comp)
        memo: Dict[State, object] = {}

        def fold(parts: List[object]):
            if any(p is None for p in parts):
                return None
            if not parts:
                return Empty()
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Concat(p, out)
            return out

        def spine(q: State):
            comp = component[q]
            steps: List[Tuple[State, ...]] = []
            side: Optional[str] = None
            p, visited = q, set()
            while True:
                if p in visited:
                    return None
                visited.add(p)
                sons = self.live_sons(p)
                inside = [i for i, s in enumerate(sons) if s in comp]
                if len(inside) != 1:
                    return None
                i = inside[0]
                here = "right" if i == len(sons) - 1 else ("left" if i == 0 else None)
                if here is None or (side is not None and here != side):
                    return None
                side = here
                steps.append(sons[:i] if here == "right" else sons[i + 1 :])
                p = sons[i]
                if p == q:
                    break
            if side == "left":
                steps.reverse()
            body = fold([build(s) for step in steps for s in step])
            if body is None:
                return None
            return OmegaPower(body) if side == "right" else OmegaRevPower(body)

        def build(q: State):
            if q not in memo:
                if self.letter_state(q):
                    memo[q] = Letter(self.state_label(q))
                elif q in self.cyclic:
                    memo[q] = spine(q)
                else:
                    memo[q] = fold([build(s) for s in self.live_sons(q)])
            return memo[q]

        return build(self.state)

    def counts(self) -> LabelledSet:
        g = self.graph
        letter_states = [q for q in g if self.letter_state(q)]
        result: Dict[Letter, float] = {}
        for label in {self.state_label(q) for q in letter_states}:
            targets = [q for q in letter_states if self.state_label(q) == label]
            reaching = set(targets)
            for t in targets:
                reaching |= nx.ancestors(g, t)
            if reaching & self.cyclic:
                result[label] = OMEGA
                continue
            memo: Dict[State, int] = {}

            def count(q: State) -> int:
                if q not in memo:
                    if self.letter_state(q):
                        memo[q] = 1 if self.state_label(q) == label else 0
                    else:
                        memo[q] = sum(count(s) for s in self.live_sons(q) if s in reaching)
                return memo[q]

            result[label] = count(self.state)
        return LabelledSet(result)


class LazyArrangement(Arrangement):
    """
    an arrangement given by oracles.

    args:
        enumerate_fn: returns a fresh fair enumeration of the addresses
        compare_fn: total order on addresses
        label_fn: address -> letter
        alphabet: declared letter set
        source: the automaton behind a frontier, when there is one
        finite: known finiteness for arrangements without a source
    """

    def __init__(
        self,
        enumerate_fn: Callable[[], Iterator[Address]],
        compare_fn: Callable[[Address, Address], Ordering],
        label_fn: Callable[[Address], Letter],
        alphabet: Optional[Iterable[Letter]] = None,
        source: Optional[FrontierSource] = None,
        finite: Optional[bool] = None,
    ):
        self._enumerate = enumerate_fn
        self._compare = compare_fn
        self._label = label_fn
        self.alphabet = None if alphabet is None else frozenset(alphabet)
        self.source = source
        self._finite = finite

    def __repr__(self) -> str:
        head = [str(self.label_at(p)) for p in self.sort_positions(list(self.positions(6)))]
        return f"LazyArrangement({' '.join(head)} ...)"

    def positions(self, limit: Optional[int] = None) -> Iterator[Address]:
        return itertools.islice(self._enumerate(), limit)

    def compare(self, u: Address, v: Address) -> Ordering:
        return self._compare(u, v)

    def label_at(self, u: Address) -> Letter:
        return self._label(u)

    def is_finite(self) -> Optional[bool]:
        if self.source is not None:
            return self.source.is_finite()
        return self._finite

    def labelled_set(self) -> LabelledSet:
        if self.source is not None:
            return self.source.counts()
        if self._finite:
            return LabelledSet.of(self.label_at(p) for p in self.positions())
        raise NeedsExpressionError("letter counts of an oracle-only arrangement are not decidable; give an expression or a term")

    def materialize(self) -> FiniteArrangement:
        """all positions of a finite arrangement."""
        if self.is_finite() is not True:
            raise ValueError("arrangement is not known to be finite")
        return FiniteArrangement(self.sort_positions(list(self.positions())), {p: self.label_at(p) for p in self.positions()}, self.alphabet)

    @classmethod
    def relabelled(cls, w: Arrangement, r: Callable[[Letter], Letter], alphabet: Optional[Iterable[Letter]] = None) -> "LazyArrangement":
        source = getattr(w, "source", None)
        return cls(
            lambda: w.positions(),
            w.compare,
            lambda u: r(w.label_at(u)),
            alphabet,
            source.relabelled(r) if source is not None else None,
            w.is_finite(),
        )


def frontier(
    automaton: TermAutomaton,
    anchor: str = "",
    is_letter: Optional[Callable[[str], bool]] = None,
    state_label: Optional[Callable[[State], Letter]] = None,
    alphabet: Optional[Iterable[Letter]] = None,
) -> LazyArrangement:
    """
    the letter occurrences below anchor, ordered lexicographically.

    args:
        automaton: the term
        anchor: Dewey word of the subterm whose frontier is taken
        is_letter: symbols treated as letters, default the signature's letters
        state_label: labelling by state, default the symbol
        alphabet: declared alphabet

    returns:
        LazyArrangement whose addresses are full Dewey words
    """
    try:
        start = automaton.state_at(anchor)
    except PositionError as e:
        raise PositionError(f"invalid anchor {anchor!r}: {e}") from None
    letter_test = is_letter or automaton.signature.is_letter
    label_of = state_label or automaton.symbol_of
    source = FrontierSource(automaton, start, letter_test, label_of)

    def enumerate_fn() -> Iterator[str]:
        productive = source.productive
        if start not in productive:
            return
        queue = deque([(anchor, start)])
        while queue:
            u, q = queue.popleft()
            if letter_test(automaton.symbol_of(q)):
                yield u
                continue
            for i, s in enumerate(automaton.sons(q)):
                if s in productive:
                    queue.append((u + str(i + 1), s))

    def label_fn(u: str) -> Letter:
        if not u.startswith(anchor):
            raise UnknownNodeError(u)
        q = automaton.state_at(u)
        if not letter_test(automaton.symbol_of(q)):
            raise UnknownNodeError(u)
        return label_of(q)

    return LazyArrangement(enumerate_fn, lex_compare, label_fn, alphabet, source)


def window(w: Arrangement, center: Optional[Address] = None, k: int = 8) -> FiniteArrangement:
    """
    up to k enumerated positions nearest to center in enumeration order, sorted by compare.

    args:
        w: any arrangement
        center: an address; the first enumerated one when omitted
        k: number of positions
    """
    if k <= 0:
        return FiniteArrangement((), {}, w.alphabet)
    seen: List[Address] = []
    index: Optional[int] = 0 if center is None else None
    for p in w.positions(WINDOW_SEARCH_BUDGET):
        seen.append(p)
        if index is None and p == center:
            index = len(seen) - 1
        if index is not None and len(seen) >= index + k:
            break
    if index is None:
        if center is not None:
            raise UnknownNodeError(center)
        index = 0
    chosen = sorted(range(len(seen)), key=lambda j: (abs(j - index), j))[:k]
    picked = [seen[j] for j in chosen]
    logger.debug(f"window of {len(picked)} positions around index {index}")
    return FiniteArrangement(w.sort_positions(picked), {p: w.label_at(p) for p in picked}, w.alphabet)
