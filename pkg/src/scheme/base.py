"""
description schemes: a state set, an axis arrangement over the states and per-state data
telling which lines hang from a node of each state. this module holds what the three
kinds share: runs, the describes check, unfolding into sequence-addressed trees and the
oracles on those sequences.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from src.arrangement import (
    Arrangement,
    FiniteArrangement,
    IsoResult,
    LabelledSet,
    Verdict,
    expression_of,
    iso,
)
from src.errors import AlphabetMismatchError, InvalidStructureError, PositionError, QuotientError, SortError, UnknownNodeError
from src.order_core import Node, Poset
from src.settings import get_settings
from src.trees import LazyStructuredTree, StructuredForest

State = Hashable
Direction = Hashable
Part = Union[Arrangement, LabelledSet]


def apply_map(f: Union[Mapping, Callable], x: Any) -> Any:
    if isinstance(f, Mapping):
        try:
            return f[x]
        except KeyError:
            raise InvalidStructureError("map is not defined on", x) from None
    return f(x)


@dataclass(frozen=True)
class Run:
    """
    labels nodes by states and non-axis lines by directions.

    args:
        r: node -> state, a mapping or a function
        rtilde: frozenset(line) -> direction (SJ and SOJ schemes)
        by_state: both maps take automaton states instead of nodes; rtilde then receives the
            state at the line root. runs on lazy values must be given this way.
    """

    r: Union[Mapping, Callable]
    rtilde: Optional[Union[Mapping, Callable]] = None
    by_state: bool = False

    @classmethod
    def of_states(cls, h: Optional[Union[Mapping, Callable]] = None, h_dir: Optional[Union[Mapping, Callable]] = None) -> "Run":
        """the run read off a term automaton: a node gets (the image of) its state."""
        return cls(h if h is not None else _identity, h_dir if h_dir is not None else _identity, by_state=True)

    def state(self, x: Any) -> State:
        return apply_map(self.r, x)

    def direction(self, line: Any) -> Direction:
        if self.rtilde is None:
            raise InvalidStructureError("run has no line labelling")
        return apply_map(self.rtilde, line)


def _identity(x: Any) -> Any:
    return x


@dataclass(frozen=True)
class DescribeReport:
    """outcome of a describes check; false on a violation, with the failing clause and place."""

    ok: bool
    clause: str = ""
    where: Any = None
    detail: str = ""
    up_to_bound: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok" if self.up_to_bound is None else f"ok up to bound {self.up_to_bound}"
        return f"violation of the {self.clause} clause at {self.where!r}: {self.detail}"


def compare_parts(expected: Part, actual: Part, bound: Optional[int] = None) -> IsoResult:
    """labelled sets compare by counts, arrangements through the isomorphism oracle."""
    if isinstance(expected, LabelledSet) or isinstance(actual, LabelledSet):
        if expected == actual:
            return IsoResult(Verdict.ISO)
        return IsoResult(Verdict.NOT_ISO, f"multisets {actual} and {expected} differ")
    try:
        return iso(actual, expected, bound)
    except AlphabetMismatchError as e:
        return IsoResult(Verdict.NOT_ISO, str(e))


def part_text(part: Part) -> str:
    """canonical text of a part: labelled sets as counts, arrangements as expression normal forms."""
    if isinstance(part, LabelledSet):
        return f"{{{part}}}"
    e = expression_of(part)
    return str(e.normal_form()) if e is not None else repr(part)


def is_empty(w: Arrangement) -> bool:
    return next(iter(w.positions(1)), None) is None


def take(w: Arrangement, width: int) -> Tuple[List[Hashable], bool]:
    """the first `width` enumerated positions and whether that is all of them."""
    found = list(w.positions(width + 1))
    return found[:width], len(found) <= width


@dataclass
class Unfolding:
    """
    a bounded materialisation of the tree a scheme describes.

    nodes are the sequences of the unfolding; run is the run built along with them. inner holds the
    nodes whose lines below were materialised in full, full_lines the lines materialised in full.
    """

    scheme: "DescriptionScheme"
    tree: StructuredForest
    run: Run
    inner: FrozenSet[Tuple]
    full_lines: FrozenSet[FrozenSet[Tuple]]
    axis_complete: bool
    depth_bound: int
    width_bound: int

    @property
    def complete(self) -> bool:
        return self.axis_complete and len(self.inner) == len(self.tree)

    def leq(self, x: Tuple, y: Tuple) -> bool:
        return self.scheme.seq_leq(x, y)

    def sqle(self, x: Tuple, y: Tuple) -> bool:
        return self.scheme.seq_sqle(x, y)

    def is_node(self, x: Tuple) -> bool:
        return self.scheme.is_sequence(x)

    def describes(self) -> DescribeReport:
        """the scheme against its own unfolding, clauses restricted to the materialised part."""
        report = self.scheme.describes(self.tree, self.run, nodes=self.inner, lines=self.full_lines, axis=self.axis_complete)
        if report.ok and not self.complete:
            return DescribeReport(True, up_to_bound=self.depth_bound)
        return report


class DescriptionScheme(ABC):
    """
    base class for SBJ, SJ and SOJ schemes.

    args:
        states: the state set Q
        axis: arrangement over Q describing the axis
        directions: the direction set D (empty for SBJ schemes)
    """

    kind = ""
    slotted = True
    state_parts_over = "directions"

    def __init__(self, states: Iterable[State], axis: Arrangement, directions: Iterable[Direction] = ()):
        self.states: Tuple[State, ...] = tuple(dict.fromkeys(states))
        self.directions: Tuple[Direction, ...] = tuple(dict.fromkeys(directions))
        self.axis = axis
        self._state_set = frozenset(self.states)
        self._direction_set = frozenset(self.directions)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self.states)} states, {len(self.directions)} directions)"

    # per-kind data

    @abstractmethod
    def line_word(self, d: Direction) -> Arrangement:
        """arrangement over Q of the lines labelled d (for SBJ schemes, d is the state of their top)."""

    @abstractmethod
    def slots(self, q: State, width: int) -> List[Tuple[Any, Direction]]:
        """(slot, direction) for the first lines hanging from a node of state q."""

    @abstractmethod
    def slots_complete(self, q: State, width: int) -> bool:
        pass

    @abstractmethod
    def slot_direction(self, q: State, slot: Any) -> Direction:
        """direction of a slot of state q; UnknownNodeError when q has no such slot."""

    @abstractmethod
    def expected_below(self, q: State) -> List[Tuple[str, Part]]:
        pass

    @abstractmethod
    def actual_below(self, j: StructuredForest, x: Node, run: Run) -> List[Tuple[str, Part]]:
        pass

    @abstractmethod
    def actual_below_lazy(self, lazy: LazyStructuredTree, u: str, run: Run) -> List[Tuple[str, Part]]:
        pass

    @abstractmethod
    def state_parts(self, q: State) -> List[Part]:
        """what a state carries: words over Q (SBJ) or data over D (SJ, SOJ)."""

    def direction_parts(self, d: Direction) -> List[Part]:
        return [self.line_word(d)]

    @abstractmethod
    def assemble(self, states, axis, state_parts: Mapping, directions, direction_parts: Mapping) -> "DescriptionScheme":
        """a scheme of the same kind from parts laid out like state_parts and direction_parts."""

    @abstractmethod
    def build_tree(self, poset: Poset, lines: List[List[Tuple]], minus: List[List[Tuple]]) -> StructuredForest:
        pass

    def key(self) -> Tuple:
        """text of every part in declaration order; equal keys mean equal schemes."""
        rows: List[Tuple] = [("axis", part_text(self.axis))]
        rows += [(repr(q),) + tuple(part_text(p) for p in self.state_parts(q)) for q in self.states]
        rows += [(repr(d),) + tuple(part_text(p) for p in self.direction_parts(d)) for d in self.directions]
        return (self.kind,) + tuple(rows)

    # sequences

    def split(self, x: Tuple) -> Tuple[Tuple, Tuple]:
        """(v0, ..., vk) and (s1, ..., sk) of a sequence."""
        if self.slotted:
            return x[0::2], x[1::2]
        return x, (None,) * (len(x) - 1)

    def depth_of(self, x: Tuple) -> int:
        return len(self.split(x)[0]) - 1

    def _v_index(self, level: int) -> int:
        return 2 * level if self.slotted else level

    def walk(self, x: Tuple) -> List[Tuple[Arrangement, State]]:
        """per level: the arrangement holding that coordinate and the state of the prefix node."""
        if not isinstance(x, tuple) or not x or (self.slotted and len(x) % 2 == 0):
            raise UnknownNodeError(x)
        vs, ss = self.split(x)
        out: List[Tuple[Arrangement, State]] = []
        w = self.axis
        try:
            q = w.label_at(vs[0])
            out.append((w, q))
            for v, s in zip(vs[1:], ss):
                w = self.line_word(self.slot_direction(q, s))
                q = w.label_at(v)
                out.append((w, q))
        except (UnknownNodeError, PositionError, KeyError, InvalidStructureError, AttributeError, TypeError, ValueError):
            raise UnknownNodeError(x) from None
        return out

    def is_sequence(self, x: Tuple) -> bool:
        try:
            self.walk(x)
        except UnknownNodeError:
            return False
        return True

    def seq_leq(self, x: Tuple, y: Tuple) -> bool:
        """x <= y: y's line prefix is a prefix of x and x's coordinate on that line is not above y's."""
        levels = self.walk(y)
        self.walk(x)
        k, j = self.depth_of(x), self.depth_of(y)
        if k < j:
            return False
        cut = self._v_index(j)
        if x[:cut] != y[:cut]:
            return False
        return int(levels[j][0].compare(x[cut], y[cut])) <= 0

    def seq_sqle(self, x: Tuple, y: Tuple) -> bool:
        raise SortError(f"{self.kind} schemes describe unordered trees")

    # unfolding

    def unfold(self, depth_bound: Optional[int] = None, width_bound: Optional[int] = None) -> Unfolding:
        """
        the nodes of depth < depth_bound whose coordinates are among the first width_bound
        enumerated positions of each arrangement (and copies of each multiset element).

        args:
            depth_bound: number of depth levels, default from settings
            width_bound: per-arrangement width, default from settings

        returns:
            Unfolding with the materialised tree, its run and completeness information
        """
        settings = get_settings()
        depth_bound = settings.unfold_depth if depth_bound is None else depth_bound
        width_bound = settings.unfold_width if width_bound is None else width_bound
        if depth_bound <= 0 or width_bound <= 0:
            raise ValueError("unfolding bounds must be positive")

        state: Dict[Tuple, State] = {}
        groups: Dict[Tuple, List[Tuple]] = {}
        group_word: Dict[Tuple, Arrangement] = {}
        group_dir: Dict[Tuple, Direction] = {}
        full_groups = set()
        inner = set()

        positions, axis_complete = take(self.axis, width_bound)
        groups[()] = []
        group_word[()] = self.axis
        for v in positions:
            x = (v,)
            state[x] = self.axis.label_at(v)
            groups[()].append(x)
        if axis_complete:
            full_groups.add(())
        level = list(groups[()])
        for depth in range(depth_bound):
            following: List[Tuple] = []
            last = depth == depth_bound - 1
            for x in level:
                q = state[x]
                slots = self.slots(q, width_bound)
                if last:
                    if not slots:
                        inner.add(x)
                    continue
                complete = self.slots_complete(q, width_bound)
                for s, d in slots:
                    w = self.line_word(d)
                    prefix = x + (s,) if self.slotted else x
                    found, full = take(w, width_bound)
                    complete = complete and full
                    if not found:
                        continue
                    groups[prefix], group_word[prefix], group_dir[prefix] = [], w, d
                    if full:
                        full_groups.add(prefix)
                    for v in found:
                        child = prefix + (v,)
                        state[child] = w.label_at(v)
                        groups[prefix].append(child)
                        following.append(child)
                if complete:
                    inner.add(x)
            level = following

        nodes = list(state)
        lines: List[List[Tuple]] = []
        rank: Dict[Tuple, int] = {}
        for prefix, members in groups.items():
            if not members:
                continue
            w = group_word[prefix]
            order = w.sort_positions([m[-1] for m in members])
            line = [prefix + (v,) for v in order]
            rank.update({m: i for i, m in enumerate(line)})
            lines.append(line)
        line_of = {m: line for line in lines for m in line}
        index = {x: i for i, x in enumerate(nodes)}
        leq = np.zeros((len(nodes), len(nodes)), dtype=bool)
        for x in nodes:
            vs = self.split(x)[0]
            for level_no in range(len(vs)):
                z = x[: self._v_index(level_no) + 1]
                line = line_of[z]
                for y in line[rank[z] :]:
                    leq[index[x], index[y]] = True
        poset = Poset.from_matrix(nodes, leq)
        minus = [line for line in lines if self.slotted and len(line[0]) > 1 and self._is_minus_slot(line[0][-2])]
        tree = self.build_tree(poset, lines, minus)
        rtilde = {frozenset(line): group_dir[line[0][:-1]] for line in lines if len(line[0]) > 1}
        logger.debug(f"unfolded {len(nodes)} nodes in {len(lines)} lines (depth {depth_bound}, width {width_bound})")
        return Unfolding(
            scheme=self,
            tree=tree,
            run=Run(state, rtilde if self.slotted else None),
            inner=frozenset(inner),
            full_lines=frozenset(frozenset(line) for line in lines if line[0][:-1] in full_groups),
            axis_complete=axis_complete,
            depth_bound=depth_bound,
            width_bound=width_bound,
        )

    def _is_minus_slot(self, slot: Any) -> bool:
        return False

    # describes

    def describes(
        self,
        j: Union[StructuredForest, LazyStructuredTree],
        run: Run,
        bound: Optional[int] = None,
        nodes: Optional[Iterable[Node]] = None,
        lines: Optional[Iterable[FrozenSet[Node]]] = None,
        axis: bool = True,
    ) -> DescribeReport:
        """
        check that run witnesses this scheme describing j.

        args:
            j: a finite structured tree, or a lazy value (then run must be by_state)
            run: the candidate run
            bound: node budget for lazy values, default from settings
            nodes, lines, axis: restrict the clauses checked on a finite tree

        returns:
            DescribeReport; on lazy values a success is only claimed up to the bound
        """
        if isinstance(j, LazyStructuredTree):
            return self._describes_lazy(j, run, bound)
        if j.sort != "t":
            raise SortError("schemes describe trees")
        checks: List[Tuple[str, Any, Part, Part]] = []
        if axis:
            checks.append(("axis", tuple(j.axis), self.axis, FiniteArrangement.from_word([run.state(x) for x in j.axis])))
        for x in j.nodes if nodes is None else nodes:
            q = run.state(x)
            if q not in self._state_set:
                return DescribeReport(False, "state", x, f"{q!r} is not a state")
            expected = dict(self.expected_below(q))
            checks.extend((clause, x, expected[clause], actual) for clause, actual in self.actual_below(j, x, run))
        if self.slotted:
            keep = None if lines is None else set(lines)
            axis_line = tuple(j.axis)
            for line in j.lines:
                if line == axis_line or (keep is not None and frozenset(line) not in keep):
                    continue
                d = run.direction(frozenset(line))
                if d not in self._direction_set:
                    return DescribeReport(False, "direction", line, f"{d!r} is not a direction")
                checks.append(("line", line, self.line_word(d), FiniteArrangement.from_word([run.state(y) for y in line])))
        return self._settle(checks, exact=True)

    def _describes_lazy(self, lazy: LazyStructuredTree, run: Run, bound: Optional[int]) -> DescribeReport:
        if not run.by_state:
            raise InvalidStructureError("a run on a lazy value must be given on automaton states")
        if lazy.sort != "t":
            raise SortError("schemes describe trees")
        budget = get_settings().describe_bound if bound is None else bound
        a = lazy.automaton
        sample = list(lazy.nodes(budget + 1))
        exhausted = len(sample) <= budget
        label = lambda q: run.state(q)
        checks: List[Tuple[str, Any, Part, Part]] = [("axis", "", self.axis, lazy.line_at("", state_label=label))]
        for u in sample[:budget]:
            q = run.state(a.state_at(u))
            if q not in self._state_set:
                return DescribeReport(False, "state", u, f"{q!r} is not a state")
            expected = dict(self.expected_below(q))
            checks.extend((clause, u, expected[clause], actual) for clause, actual in self.actual_below_lazy(lazy, u, run))
            if self.slotted:
                for root, _ in lazy.topped_lines(u):
                    d = run.direction(a.state_at(root))
                    if d not in self._direction_set:
                        return DescribeReport(False, "direction", root, f"{d!r} is not a direction")
                    checks.append(("line", root, self.line_word(d), lazy.line_at(root, state_label=label)))
        report = self._settle(checks, exact=exhausted)
        if report.ok and report.up_to_bound is not None:
            logger.warning(f"describes verified only up to bound {budget}")
            return DescribeReport(True, up_to_bound=budget)
        return report

    def _settle(self, checks: List[Tuple[str, Any, Part, Part]], exact: bool) -> DescribeReport:
        bound = get_settings().iso_bound
        undecided = False
        for clause, where, expected, actual in checks:
            result = compare_parts(expected, actual, bound)
            if result.verdict is Verdict.NOT_ISO:
                return DescribeReport(False, clause, where, result.certificate)
            undecided = undecided or result.verdict is Verdict.UNKNOWN
        return DescribeReport(True, up_to_bound=bound if (undecided or not exact) else None)

    # quotients

    def _fibres(self, s: Union[Mapping, Callable], items: Sequence[Hashable]) -> Dict[Hashable, List[Hashable]]:
        fibres: Dict[Hashable, List[Hashable]] = {}
        for q in items:
            fibres.setdefault(apply_map(s, q), []).append(q)
        return fibres

    def _check_fibres(self, fibres: Mapping[Hashable, List[Hashable]], parts: Callable[[Hashable], List[Part]]) -> None:
        bound = get_settings().iso_bound
        for members in fibres.values():
            first = parts(members[0])
            for other in members[1:]:
                for a, b in zip(first, parts(other)):
                    result = compare_parts(a, b, bound)
                    if result.verdict is not Verdict.ISO:
                        reason = result.certificate or f"isomorphism undecided at bound {bound}"
                        raise QuotientError(f"states cannot be merged ({reason})", (members[0], other))


    def quotient(self, s: Union[Mapping, Callable], s_dir: Optional[Union[Mapping, Callable]] = None) -> "DescriptionScheme":
        """
        merge states (and directions) along surjective maps.

        args:
            s: Q -> Q', a mapping or a function
            s_dir: D -> D', identity when omitted

        returns:
            the quotient scheme; a run r of this scheme gives the run s . r of the quotient

        raises:
            QuotientError naming two merged states whose data are not isomorphic after relabelling
        """
        s_dir = _identity if s_dir is None else s_dir
        over = s if self.state_parts_over == "states" else s_dir
        state_data = lambda p: p.relabel(lambda a: apply_map(over, a))
        over_states = lambda p: p.relabel(lambda a: apply_map(s, a))
        state_fibres = self._fibres(s, self.states)
        dir_fibres = self._fibres(s_dir, self.directions)
        self._check_fibres(state_fibres, lambda q: [state_data(p) for p in self.state_parts(q)])
        self._check_fibres(dir_fibres, lambda d: [over_states(p) for p in self.direction_parts(d)])
        logger.debug(f"quotient: {len(self.states)} -> {len(state_fibres)} states, {len(self.directions)} -> {len(dir_fibres)} directions")
        return self.assemble(
            list(state_fibres),
            over_states(self.axis),
            {q: [state_data(p) for p in self.state_parts(members[0])] for q, members in state_fibres.items()},
            list(dir_fibres),
            {d: [over_states(p) for p in self.direction_parts(members[0])] for d, members in dir_fibres.items()},
        )


def term_run(lazy: LazyStructuredTree, h: Optional[Union[Mapping, Callable]] = None, h_dir: Optional[Union[Mapping, Callable]] = None) -> Run:
    """
    the run of a scheme read off a term: each node gets the image of its ext state, each line
    the image of the state at its root. finite values get a run on their node ids.
    """
    h = _identity if h is None else h
    h_dir = _identity if h_dir is None else h_dir
    if not lazy.is_finite():
        return Run.of_states(h, h_dir)
    a = lazy.automaton
    positions = list(lazy.nodes())
    r = {lazy.node_id(u): apply_map(h, a.state_at(u)) for u in positions}
    groups: Dict[str, List[Hashable]] = {}
    for u in positions:
        groups.setdefault(lazy.line_root(u), []).append(lazy.node_id(u))
    rtilde = {frozenset(ids): apply_map(h_dir, a.state_at(root)) for root, ids in groups.items()}
    return Run(r, rtilde)


def settle(w: Arrangement) -> Arrangement:
    """the expression of w when its shape is recognised, w itself otherwise."""
    e = expression_of(w)
    return w if e is None else e
