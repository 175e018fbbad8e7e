"""
canonical minimization of schemes and the isomorphism test built on it.

states and directions are refined by colours: a colour is a digest of the previous colour and
of the state's data written with colours for letters, so colours never depend on the input's
names. the stable colouring is the coarsest partition compatible with the data; classes are
then named q0, q1, ... (and d0, ...) in breadth-first order from the axis.
"""
from __future__ import annotations

import hashlib
from collections import deque
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from loguru import logger

from src.arrangement import (
    Concat,
    Empty,
    IsoResult,
    LabelledSet,
    Letter,
    OmegaPower,
    OmegaRevPower,
    RegularArrangementExpr,
    Shuffle,
    Verdict,
    expression_of,
)
from src.errors import UnsupportedSchemeError

from .base import DescriptionScheme, Part, part_text


def _normalized(part: Part) -> Part:
    if isinstance(part, LabelledSet):
        return part
    e = expression_of(part)
    if e is None or e.kind() is None:
        raise UnsupportedSchemeError(f"arrangement {part!r} is outside the fragment decided by normal forms")
    return e.normal_form()


def _letters(part: Part) -> Tuple[Hashable, ...]:
    if isinstance(part, LabelledSet):
        return part.letters()
    return tuple(part.letters())


def _relabel(part: Part, r: Callable[[Hashable], Hashable]) -> Part:
    relabelled = part.relabel(r)
    return relabelled if isinstance(relabelled, LabelledSet) else relabelled.normal_form()


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _in_order(part: Part) -> List[Hashable]:
    """letters of a colour-labelled part, first occurrence first; unordered parts go by colour."""
    if isinstance(part, LabelledSet):
        return list(part.letters())
    out: List[Hashable] = []

    def walk(e: RegularArrangementExpr) -> None:
        if isinstance(e, Letter):
            out.append(e.letter)
        elif isinstance(e, Concat):
            walk(e.left)
            walk(e.right)
        elif isinstance(e, (OmegaPower, OmegaRevPower)):
            walk(e.body)
        elif isinstance(e, Shuffle):
            for p in sorted(e.parts, key=str):
                walk(p)
        elif not isinstance(e, Empty):
            raise UnsupportedSchemeError(f"unexpected expression {e!r}")

    walk(part)
    return list(dict.fromkeys(out))


class _Tables:
    """the scheme's data in normal form, restricted to what the axis reaches."""

    def __init__(self, scheme: DescriptionScheme):
        self.scheme = scheme
        self.over_states = scheme.state_parts_over == "states"
        self.axis = _normalized(scheme.axis)
        states: Dict[Hashable, List[Part]] = {}
        directions: Dict[Hashable, List[Part]] = {}
        queue = deque(("q", q) for q in _letters(self.axis))
        while queue:
            kind, x = queue.popleft()
            table = states if kind == "q" else directions
            if x in table:
                continue
            parts = [_normalized(p) for p in (scheme.state_parts(x) if kind == "q" else scheme.direction_parts(x))]
            table[x] = parts
            target = "q" if kind == "d" or self.over_states else "d"
            queue.extend((target, y) for p in parts for y in _letters(p))
        self.states = states
        self.directions = directions

    def target(self, kind: str) -> str:
        return "q" if kind == "d" or self.over_states else "d"


def _refine(t: _Tables) -> Tuple[Dict[Hashable, str], Dict[Hashable, str]]:
    colour = {"q": {q: "q" for q in t.states}, "d": {d: "d" for d in t.directions}}
    tables = {"q": t.states, "d": t.directions}
    blocks = -1
    rounds = 0
    while True:
        rounds += 1
        fresh: Dict[str, Dict[Hashable, str]] = {}
        for kind, table in tables.items():
            palette = colour[t.target(kind)]
            fresh[kind] = {
                x: _digest(colour[kind][x] + "|" + "|".join(part_text(_relabel(p, palette.__getitem__)) for p in parts))
                for x, parts in table.items()
            }
        count = len(set(fresh["q"].values())) + len(set(fresh["d"].values()))
        colour = fresh
        if count == blocks:
            break
        blocks = count
    logger.debug(f"refinement stable after {rounds} rounds with {blocks} classes")
    return colour["q"], colour["d"]


def minimize(scheme: DescriptionScheme) -> DescriptionScheme:
    """
    the canonical minimal scheme describing the same tree.

    args:
        scheme: a scheme whose arrangements lie in the expression fragment (finite words, u v^w,
            v^-w u and letter shuffles)

    returns:
        a scheme of the same kind with states q0, q1, ... and directions d0, d1, ...; isomorphic
        inputs give equal keys

    raises:
        UnsupportedSchemeError when an arrangement has no recognised expression
    """
    t = _Tables(scheme)
    colour_q, colour_d = _refine(t)
    colours = {"q": colour_q, "d": colour_d}
    members: Dict[str, Dict[str, Hashable]] = {"q": {}, "d": {}}
    for kind in ("q", "d"):
        for x, c in colours[kind].items():
            members[kind].setdefault(c, x)

    def data(kind: str, c: str) -> List[Part]:
        x = members[kind][c]
        table = t.states if kind == "q" else t.directions
        palette = colours[t.target(kind)]
        return [_relabel(p, palette.__getitem__) for p in table[x]]

    names: Dict[str, Dict[str, str]] = {"q": {}, "d": {}}
    axis = _relabel(t.axis, colour_q.__getitem__)
    queue = deque(("q", c) for c in _in_order(axis))
    while queue:
        kind, c = queue.popleft()
        if c in names[kind]:
            continue
        names[kind][c] = f"{kind}{len(names[kind])}"
        target = t.target(kind)
        queue.extend((target, y) for p in data(kind, c) for y in _in_order(p))

    def named(kind: str) -> Callable[[Hashable], str]:
        return names[kind].__getitem__

    state_names = list(names["q"].values())
    direction_names = list(names["d"].values())
    state_parts = {names["q"][c]: [_relabel(p, named(t.target("q"))) for p in data("q", c)] for c in names["q"]}
    direction_parts = {names["d"][c]: [_relabel(p, named("q")) for p in data("d", c)] for c in names["d"]}
    result = scheme.assemble(state_names, _relabel(axis, named("q")), state_parts, direction_names, direction_parts)
    logger.debug(f"minimized {len(scheme.states)} states to {len(state_names)}, {len(scheme.directions)} directions to {len(direction_names)}")
    return result


def iso_schemes(s1: DescriptionScheme, s2: DescriptionScheme, depth: Optional[int] = None, width: Optional[int] = None) -> IsoResult:
    """
    whether two schemes describe isomorphic trees.

    canonical minimal schemes decide inside the expression fragment; outside it, complete
    unfoldings are compared by canonical code and anything else is unknown at the bound.
    """
    if s1.kind != s2.kind:
        return IsoResult(Verdict.NOT_ISO, f"scheme kinds {s1.kind} and {s2.kind} differ")
    try:
        m1, m2 = minimize(s1), minimize(s2)
    except UnsupportedSchemeError as e:
        logger.warning(f"falling back to bounded unfoldings: {e}")
    else:
        if m1.key() == m2.key():
            return IsoResult(Verdict.ISO)
        return IsoResult(Verdict.NOT_ISO, f"minimal schemes differ ({len(m1.states)} and {len(m2.states)} states)")
    u1, u2 = s1.unfold(depth, width), s2.unfold(depth, width)
    if u1.complete and u2.complete:
        if u1.tree.canonical_code() == u2.tree.canonical_code():
            return IsoResult(Verdict.ISO)
        return IsoResult(Verdict.NOT_ISO, "finite unfoldings differ")
    return IsoResult(Verdict.UNKNOWN, bound=u1.depth_bound)
