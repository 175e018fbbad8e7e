"""
term automata: a finite presentation (Q, q0, tau) of a regular, possibly infinite term.

tau maps each state to its symbol and the states of its sons; the term is the unfolding
from q0. positions are Dewey words over '1'..'9' and are walked from the root state.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from loguru import logger

from src.errors import InvalidStructureError, PositionError
from src.term.finite_term import FiniteTerm, Position
from src.term.signature import Signature

State = Hashable
Transition = Tuple[str, Tuple[State, ...]]


class TermAutomaton:
    """
    a regular term presented by a finite automaton.

    args:
        states: the state set Q (its order fixes enumeration orders)
        root: the state at the empty position
        tau: state -> (symbol, son states)
        signature: the signature the term lives in
        names: optional node names for ext states
    """

    def __init__(
        self,
        states: Sequence[State],
        root: State,
        tau: Mapping[State, Transition],
        signature: Signature,
        names: Optional[Mapping[State, str]] = None,
    ):
        self.states: Tuple[State, ...] = tuple(states)
        self.root = root
        self.tau: Dict[State, Transition] = {q: (sym, tuple(sons)) for q, (sym, sons) in tau.items()}
        self.signature = signature
        self.names: Dict[State, str] = dict(names or {})
        if root not in self.tau:
            raise InvalidStructureError("root state has no transition", root)

    def __repr__(self) -> str:
        return f"TermAutomaton({len(self.states)} states over {self.signature.name}, root={self.root!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermAutomaton):
            return NotImplemented
        return (self.root, self.tau, self.signature, self.names) == (other.root, other.tau, other.signature, other.names)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_finite_term(cls, term: FiniteTerm, signature: Signature) -> "TermAutomaton":
        """identity presentation: one state per position."""
        tau: Dict[State, Transition] = {}
        names: Dict[State, str] = {}
        order: List[State] = []
        for u, node in term.positions():
            order.append(u)
            tau[u] = (node.symbol, tuple(u + str(i + 1) for i in range(len(node.children))))
            if node.name is not None:
                names[u] = node.name
        return cls(order, "", tau, signature, names)

    # state level

    def symbol_of(self, state: State) -> str:
        return self.tau[state][0]

    def sons(self, state: State) -> Tuple[State, ...]:
        return self.tau[state][1]

    def sort_of(self, state: State) -> str:
        return self.signature.spec(self.symbol_of(state)).sort

    @property
    def root_sort(self) -> str:
        return self.sort_of(self.root)

    def step(self, state: State, digit: str) -> State:
        sons = self.sons(state)
        i = int(digit) - 1
        if not 0 <= i < len(sons):
            raise PositionError(f"digit {digit} exceeds the arity of {self.symbol_of(state)!r}")
        return sons[i]

    def reachable(self, start: Optional[State] = None) -> Tuple[State, ...]:
        start = self.root if start is None else start
        seen: Dict[State, None] = {start: None}
        queue = deque([start])
        while queue:
            q = queue.popleft()
            for s in self.sons(q):
                if s not in seen:
                    seen[s] = None
                    queue.append(s)
        return tuple(seen)

    def validate(self) -> List[str]:
        """arity, sort and reachability problems; an empty list means the automaton is well formed."""
        errors: List[str] = []
        for q in self.states:
            if q not in self.tau:
                errors.append(f"state {q!r}: no transition")
                continue
            symbol, sons = self.tau[q]
            try:
                spec = self.signature.spec(symbol)
            except Exception as e:
                errors.append(f"state {q!r}: {e}")
                continue
            if spec.arity != len(sons):
                errors.append(f"state {q!r}: {symbol} expects {spec.arity} sons, got {len(sons)}")
                continue
            for i, (s, expected) in enumerate(zip(sons, spec.arg_sorts)):
                if s not in self.tau:
                    errors.append(f"state {q!r}: son {i + 1} is undefined state {s!r}")
                    continue
                got = self.sort_of(s)
                if got != expected:
                    errors.append(f"state {q!r}: son {i + 1} has sort {got}, {symbol} expects {expected}")
        if not errors:
            reachable = set(self.reachable())
            for q in self.states:
                if q not in reachable:
                    errors.append(f"state {q!r}: unreachable from the root")
        if errors:
            logger.debug(f"automaton validation found {len(errors)} problems")
        return errors

    def rerooted(self, state: State) -> "TermAutomaton":
        """the subterm presented from another state."""
        keep = self.reachable(state)
        return TermAutomaton(keep, state, {q: self.tau[q] for q in keep}, self.signature, {q: n for q, n in self.names.items() if q in keep})

    def has_cycle(self, start: Optional[State] = None, within: Optional[FrozenSet[State]] = None) -> bool:
        """whether some state reachable from start (staying inside `within`) lies on a cycle."""
        start = self.root if start is None else start
        color: Dict[State, int] = {}
        stack: List[Tuple[State, Iterator[State]]] = [(start, iter(self.sons(start)))]
        color[start] = 1
        while stack:
            q, it = stack[-1]
            advanced = False
            for s in it:
                if within is not None and s not in within:
                    continue
                c = color.get(s, 0)
                if c == 1:
                    return True
                if c == 0:
                    color[s] = 1
                    stack.append((s, iter(self.sons(s))))
                    advanced = True
                    break
            if not advanced:
                color[q] = 2
                stack.pop()
        return False

    def is_finite(self) -> bool:
        return not self.has_cycle()

    # position level

    def state_at(self, u: Position) -> State:
        q = self.root
        for digit in u:
            q = self.step(q, digit)
        return q

    def symbol_at(self, u: Position) -> str:
        return self.symbol_of(self.state_at(u))

    def name_at(self, u: Position) -> Optional[str]:
        return self.names.get(self.state_at(u))

    def is_position(self, u: Position) -> bool:
        try:
            self.state_at(u)
        except PositionError:
            return False
        return True

    def positions(self, max_length: int, anchor: Position = "") -> Iterator[Tuple[Position, State]]:
        """breadth-first positions below anchor of length <= max_length."""
        queue = deque([(anchor, self.state_at(anchor))])
        while queue:
            u, q = queue.popleft()
            yield u, q
            if len(u) < max_length:
                for i, s in enumerate(self.sons(q)):
                    queue.append((u + str(i + 1), s))

    def truncate(self, depth: int) -> FiniteTerm:
        """positions of length < depth kept, Omega of the matching sort at length depth."""

        def build(q: State, level: int) -> FiniteTerm:
            if level >= depth:
                return FiniteTerm(self.signature.omega(self.sort_of(q)))
            symbol, sons = self.tau[q]
            return FiniteTerm(symbol, tuple(build(s, level + 1) for s in sons), self.names.get(q))

        return build(self.root, 0)

    def to_finite_term(self) -> FiniteTerm:
        if not self.is_finite():
            raise InvalidStructureError("term is infinite")

        def build(q: State) -> FiniteTerm:
            symbol, sons = self.tau[q]
            return FiniteTerm(symbol, tuple(build(s) for s in sons), self.names.get(q))

        return build(self.root)

    def productive(self, is_letter: Callable[[str], bool]) -> FrozenSet[State]:
        """states whose subterm has at least one letter occurrence."""
        good: Set[State] = {q for q in self.tau if is_letter(self.symbol_of(q))}
        changed = True
        while changed:
            changed = False
            for q, (symbol, sons) in self.tau.items():
                if q not in good and not is_letter(symbol) and any(s in good for s in sons):
                    good.add(q)
                    changed = True
        return frozenset(good)

    def canonicalize(self) -> "TermAutomaton":
        """
        merge states presenting the same subterm (hash-consing by partition refinement).

        returns:
            an automaton with one state per distinct reachable subterm, states renamed
            0, 1, ... in breadth-first order from the root
        """
        live = self.reachable()
        block: Dict[State, int] = {}
        keys: Dict[Tuple, int] = {}
        for q in live:
            key = (self.symbol_of(q), len(self.sons(q)), self.names.get(q))
            block[q] = keys.setdefault(key, len(keys))
        rounds = 0
        while True:
            rounds += 1
            keys = {}
            refined = {}
            for q in live:
                key = (block[q], tuple(block[s] for s in self.sons(q)))
                refined[q] = keys.setdefault(key, len(keys))
            if len(set(refined.values())) == len(set(block.values())):
                break
            block = refined
        logger.debug(f"canonicalize: {len(live)} states -> {len(set(block.values()))} after {rounds} rounds")
        rename: Dict[int, int] = {}
        representative: Dict[int, State] = {}
        for q in live:
            if block[q] not in rename:
                rename[block[q]] = len(rename)
                representative[block[q]] = q
        tau = {
            rename[b]: (self.symbol_of(q), tuple(rename[block[s]] for s in self.sons(q))) for b, q in representative.items()
        }
        names = {rename[b]: self.names[q] for b, q in representative.items() if q in self.names}
        return TermAutomaton(sorted(tau), rename[block[self.root]], tau, self.signature, names)


TermLike = Union[FiniteTerm, TermAutomaton]


def as_automaton(t: TermLike, signature: Signature) -> TermAutomaton:
    return t if isinstance(t, TermAutomaton) else TermAutomaton.from_finite_term(t, signature)


def pos_meet(u: Position, v: Position) -> Tuple[Position, Optional[str], Optional[str]]:
    """longest common prefix of u and v and the next digit on each side (None when exhausted)."""
    k = 0
    while k < len(u) and k < len(v) and u[k] == v[k]:
        k += 1
    return u[:k], (u[k] if k < len(u) else None), (v[k] if k < len(v) else None)


def truncate(t: TermAutomaton, depth: int) -> FiniteTerm:
    return t.truncate(depth)


def term_leq(t1: FiniteTerm, t2: TermLike, signature: Signature) -> bool:
    """t1 << t2: every non-Omega occurrence of t1 carries the same symbol in t2."""
    other = as_automaton(t2, signature)
    for u, node in t1.positions():
        if signature.is_omega(node.symbol):
            continue
        try:
            if other.symbol_at(u) != node.symbol:
                return False
        except PositionError:
            return False
    return True
