"""
regular arrangement expressions: empty, letters, concatenation, omega and reverse omega
powers, and eta-shuffles.

an expression is an arrangement in its own right: it compiles to a term over the
arrangement signature and its positions are the Dewey words of that term's frontier.
normal_form() rewrites by Omega elimination, primitive periods, x(yx)^w = (xy)^w and its
mirror, shuffle idempotence and shuffle absorption.
"""
from __future__ import annotations

import re
from abc import abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Hashable, Iterator, List, Optional, Tuple

from src.errors import FormatError
from src.term.automaton import TermAutomaton
from src.term.signature import ARRANGEMENT

from .base import Address, Arrangement, Ordering
from .labelled_set import OMEGA, LabelledSet


class RegularArrangementExpr(Arrangement):
    """base of the expression constructors; arrangement queries go through the compiled frontier."""

    # expression structure

    @abstractmethod
    def letters(self) -> FrozenSet[Hashable]:
        pass

    @abstractmethod
    def is_finite(self) -> bool:
        pass

    @abstractmethod
    def relabel(self, r: Callable[[Hashable], Hashable], alphabet=None) -> "RegularArrangementExpr":
        pass

    @abstractmethod
    def labelled_set(self) -> LabelledSet:
        pass

    def word(self) -> Tuple[Hashable, ...]:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return tuple(i.letter for i in _items(self))

    def normal_form(self) -> "RegularArrangementExpr":
        return _assemble(_simplify(_items(self)))

    def kind(self) -> Optional[str]:
        """shape of the normal form when it lies in the exactly decided fragment, else None."""
        items = _simplify(_items(self))
        if all(isinstance(i, Letter) for i in items):
            return "finite"
        if isinstance(items[-1], OmegaPower) and all(isinstance(i, Letter) for i in items[:-1]) and items[-1].body.is_word():
            return "omega"
        if isinstance(items[0], OmegaRevPower) and all(isinstance(i, Letter) for i in items[1:]) and items[0].body.is_word():
            return "omega-rev"
        if len(items) == 1 and isinstance(items[0], Shuffle) and all(isinstance(p, Letter) for p in items[0].parts):
            return "eta"
        return None

    def is_word(self) -> bool:
        return all(isinstance(i, Letter) for i in _items(self))

    # compiled view

    def compile(self) -> TermAutomaton:
        """a term over {dot, Omega} plus letters whose frontier is this arrangement."""
        builder = _Compiler()
        root = builder.build(self)
        return TermAutomaton(builder.order, root, builder.tau, ARRANGEMENT)

    @cached_property
    def lazy(self) -> Arrangement:
        from .lazy import frontier

        builder = _Compiler()
        root = builder.build(self)
        letters = {q: a for a, q in builder.letter_states.items()}
        automaton = TermAutomaton(builder.order, root, builder.tau, ARRANGEMENT)
        return frontier(automaton, "", state_label=lambda q: letters[q])

    def positions(self, limit: Optional[int] = None) -> Iterator[Address]:
        return self.lazy.positions(limit)

    def compare(self, u: Address, v: Address) -> Ordering:
        return self.lazy.compare(u, v)

    def label_at(self, u: Address) -> Hashable:
        return self.lazy.label_at(u)

    @property
    def source(self):
        return self.lazy.source

    @abstractmethod
    def __str__(self) -> str:
        pass


@dataclass(frozen=True)
class Empty(RegularArrangementExpr):
    def letters(self) -> FrozenSet[Hashable]:
        return frozenset()

    def is_finite(self) -> bool:
        return True

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return self

    def labelled_set(self) -> LabelledSet:
        return LabelledSet()

    def __str__(self) -> str:
        return "empty"


@dataclass(frozen=True)
class Letter(RegularArrangementExpr):
    letter: Hashable

    def letters(self) -> FrozenSet[Hashable]:
        return frozenset([self.letter])

    def is_finite(self) -> bool:
        return True

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return Letter(r(self.letter))

    def labelled_set(self) -> LabelledSet:
        return LabelledSet({self.letter: 1})

    def __str__(self) -> str:
        text = str(self.letter)
        return text if re.fullmatch(r"[A-Za-z0-9_]+", text) and text not in ("empty", "Omega", "sh") else f"'{text}'"


@dataclass(frozen=True)
class Concat(RegularArrangementExpr):
    left: RegularArrangementExpr
    right: RegularArrangementExpr

    def letters(self) -> FrozenSet[Hashable]:
        return self.left.letters() | self.right.letters()

    def is_finite(self) -> bool:
        return self.left.is_finite() and self.right.is_finite()

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return Concat(self.left.relabel(r), self.right.relabel(r))

    def labelled_set(self) -> LabelledSet:
        return self.left.labelled_set() + self.right.labelled_set()

    def __str__(self) -> str:
        return " . ".join(_atom(i) if not isinstance(i, Concat) else str(i) for i in (self.left, self.right))


@dataclass(frozen=True)
class OmegaPower(RegularArrangementExpr):
    body: RegularArrangementExpr

    def letters(self) -> FrozenSet[Hashable]:
        return self.body.letters()

    def is_finite(self) -> bool:
        return not self.body.letters()

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return OmegaPower(self.body.relabel(r))

    def labelled_set(self) -> LabelledSet:
        return LabelledSet({a: OMEGA for a in self.body.letters()})

    def __str__(self) -> str:
        return f"{_atom(self.body)}^w"


@dataclass(frozen=True)
class OmegaRevPower(RegularArrangementExpr):
    body: RegularArrangementExpr

    def letters(self) -> FrozenSet[Hashable]:
        return self.body.letters()

    def is_finite(self) -> bool:
        return not self.body.letters()

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return OmegaRevPower(self.body.relabel(r))

    def labelled_set(self) -> LabelledSet:
        return LabelledSet({a: OMEGA for a in self.body.letters()})

    def __str__(self) -> str:
        return f"{_atom(self.body)}^-w"


@dataclass(frozen=True)
class Shuffle(RegularArrangementExpr):
    parts: Tuple[RegularArrangementExpr, ...]

    def letters(self) -> FrozenSet[Hashable]:
        out: FrozenSet[Hashable] = frozenset()
        for p in self.parts:
            out |= p.letters()
        return out

    def is_finite(self) -> bool:
        return not self.letters()

    def relabel(self, r, alphabet=None) -> RegularArrangementExpr:
        return Shuffle(tuple(p.relabel(r) for p in self.parts))

    def labelled_set(self) -> LabelledSet:
        return LabelledSet({a: OMEGA for a in self.letters()})

    def __str__(self) -> str:
        return "sh{" + ", ".join(str(p) for p in self.parts) + "}"


def _atom(e: RegularArrangementExpr) -> str:
    return f"({e})" if isinstance(e, Concat) else str(e)


def word_expr(letters) -> RegularArrangementExpr:
    return _assemble([Letter(a) for a in letters])


def omega_power(e: RegularArrangementExpr) -> OmegaPower:
    return OmegaPower(e)


def omega_rev_power(e: RegularArrangementExpr) -> OmegaRevPower:
    return OmegaRevPower(e)


def eta_shuffle(*parts: RegularArrangementExpr) -> Shuffle:
    return Shuffle(tuple(parts))


# normal form


def _items(e: RegularArrangementExpr) -> List[RegularArrangementExpr]:
    if isinstance(e, Empty):
        return []
    if isinstance(e, Letter):
        return [e]
    if isinstance(e, Concat):
        return _items(e.left) + _items(e.right)
    if isinstance(e, (OmegaPower, OmegaRevPower)):
        body = _simplify(_items(e.body))
        if not body:
            return []
        if all(isinstance(i, Letter) for i in body):
            body = _primitive_root(body)
        return [type(e)(_assemble(body))]
    if isinstance(e, Shuffle):
        parts = {_assemble(_simplify(_items(p))) for p in e.parts}
        parts.discard(Empty())
        if not parts:
            return []
        return [Shuffle(tuple(sorted(parts, key=str)))]
    raise TypeError(f"not an arrangement expression: {e!r}")


def _primitive_root(word: List[RegularArrangementExpr]) -> List[RegularArrangementExpr]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def _simplify(items: List[RegularArrangementExpr]) -> List[RegularArrangementExpr]:
    items = list(items)
    changed = True
    while changed:
        changed = False
        for i, item in enumerate(items):
            if isinstance(item, OmegaPower) and item.body.is_word() and i > 0 and items[i - 1] == Letter(item.body.word()[-1]):
                v = list(item.body.word())
                items[i - 1 : i + 1] = [OmegaPower(word_expr(v[-1:] + v[:-1]))]
                changed = True
                break
            if isinstance(item, OmegaRevPower) and item.body.is_word() and i + 1 < len(items) and items[i + 1] == Letter(item.body.word()[0]):
                v = list(item.body.word())
                items[i : i + 2] = [OmegaRevPower(word_expr(v[1:] + v[:1]))]
                changed = True
                break
            if isinstance(item, Shuffle) and i + 1 < len(items) and items[i + 1] == item:
                del items[i + 1]
                changed = True
                break
            if isinstance(item, Shuffle) and i + 2 < len(items) and items[i + 2] == item and items[i + 1] in item.parts:
                del items[i + 1 : i + 3]
                changed = True
                break
    return items


def _assemble(items: List[RegularArrangementExpr]) -> RegularArrangementExpr:
    if not items:
        return Empty()
    out = items[-1]
    for item in reversed(items[:-1]):
        out = Concat(item, out)
    return out


class _Compiler:
    def __init__(self) -> None:
        self.tau: Dict[int, Tuple[str, Tuple[int, ...]]] = {}
        self.order: List[int] = []
        self.letter_states: Dict[Hashable, int] = {}

    def fresh(self) -> int:
        q = len(self.order)
        self.order.append(q)
        return q

    def build(self, e: RegularArrangementExpr) -> int:
        if isinstance(e, Letter):
            if e.letter not in self.letter_states:
                q = self.fresh()
                self.tau[q] = (str(e.letter), ())
                self.letter_states[e.letter] = q
            return self.letter_states[e.letter]
        if isinstance(e, Empty):
            q = self.fresh()
            self.tau[q] = ("Omega", ())
            return q
        if isinstance(e, Concat):
            q = self.fresh()
            self.tau[q] = ("dot", (self.build(e.left), self.build(e.right)))
            return q
        if isinstance(e, OmegaPower):
            t = self.fresh()
            self.tau[t] = ("dot", (self.build(e.body), t))
            return t
        if isinstance(e, OmegaRevPower):
            t = self.fresh()
            self.tau[t] = ("dot", (t, self.build(e.body)))
            return t
        if isinstance(e, Shuffle):
            if not e.parts:
                return self.build(Empty())
            # t = t . (p1 . (t . (p2 . ... (t . (pk . t)))))
            t = self.fresh()
            rest = t
            for index in range(len(e.parts) - 1, -1, -1):
                inner = self.fresh()
                self.tau[inner] = ("dot", (self.build(e.parts[index]), rest))
                rest = inner
                if index > 0:
                    glue = self.fresh()
                    self.tau[glue] = ("dot", (t, inner))
                    rest = glue
            self.tau[t] = ("dot", (t, rest))
            return t
        raise TypeError(f"not an arrangement expression: {e!r}")


# parser

_TOKEN = re.compile(r"\s*(?:(?P<pow>\^-?w)|(?P<sh>sh\{)|(?P<quoted>'[^']*')|(?P<ident>[A-Za-z0-9_]+)|(?P<punct>[().,}]))")


def parse_expression(text: str, line: Optional[int] = None) -> RegularArrangementExpr:
    """
    parse `empty`, `'a'` (or a bare identifier), `e1 . e2`, `e^w`, `e^-w`, `sh{e1,...,ek}`.
    """
    tokens: List[Tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormatError(f"unexpected character in expression: {text[pos:pos + 10]!r}", line)
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    i = 0

    def peek() -> Optional[Tuple[str, str]]:
        return tokens[i] if i < len(tokens) else None

    def take(value: Optional[str] = None) -> Tuple[str, str]:
        nonlocal i
        tok = peek()
        if tok is None or (value is not None and tok[1] != value):
            raise FormatError(f"expected {value or 'more input'} in expression {text!r}", line)
        i += 1
        return tok

    def concat_expr() -> RegularArrangementExpr:
        left = postfix()
        while peek() is not None and peek()[1] == ".":
            take(".")
            left = Concat(left, postfix())
        return left

    def postfix() -> RegularArrangementExpr:
        e = primary()
        while peek() is not None and peek()[0] == "pow":
            e = OmegaRevPower(e) if take()[1] == "^-w" else OmegaPower(e)
        return e

    def primary() -> RegularArrangementExpr:
        kind, value = take()
        if value == "(":
            e = concat_expr()
            take(")")
            return e
        if kind == "sh":
            parts = [concat_expr()]
            while peek() is not None and peek()[1] == ",":
                take(",")
                parts.append(concat_expr())
            take("}")
            return Shuffle(tuple(parts))
        if kind == "quoted":
            return Letter(value[1:-1])
        if kind == "ident":
            return Empty() if value in ("empty", "Omega") else Letter(value)
        raise FormatError(f"unexpected {value!r} in expression {text!r}", line)

    if not tokens:
        raise FormatError("empty expression", line)
    result = concat_expr()
    if peek() is not None:
        raise FormatError(f"trailing {peek()[1]!r} in expression {text!r}", line)
    return result
