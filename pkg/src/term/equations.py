"""
equation systems `name = expr`, one per line, solved into term automata.

expr is built from `.` (concatenation), `U+` (forest union), `x` or `*` (hedge product),
applications `f(e1, ..., ek)`, named ext occurrences `ext[a](e)`, `Omega` (resolved
to the Omega of the expected sort), letters and unknown names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from loguru import logger

from src.errors import EquationError, TermSyntaxError
from src.term.automaton import TermAutomaton
from src.term.signature import INFIX, Signature

_TOKEN = re.compile(r"\s*(?:(?P<infix>U\+|\.|\*)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[()\[\],=]))")
_RESERVED = "{!r} is the hedge product operator and cannot name an unknown, a letter or a node"
_WORD_OPERATORS = {op for op in INFIX if op.isidentifier()}


@dataclass(frozen=True)
class _Ref:
    name: str


@dataclass(frozen=True)
class _Node:
    symbol: str
    args: Tuple["_Expr", ...]
    name: Optional[str] = None


_Expr = Union[_Ref, _Node]


def _tokenize(text: str, line: int) -> List[str]:
    tokens: List[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character {text[pos:].strip()[:1]!r}", line)
        tokens.append(m.group(m.lastgroup))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[str], unknowns: set, line: int):
        self.tokens = tokens
        self.i = 0
        self.unknowns = unknowns
        self.line = line

    def peek(self) -> Optional[str]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TermSyntaxError(f"expected {expected or 'a token'}, found {tok or 'end of line'}", self.line)
        self.i += 1
        return tok

    def expr(self) -> _Expr:
        left = self.primary()
        while self.peek() in INFIX:
            op = INFIX[self.take()]
            right = self.primary()
            left = _Node(op, (left, right))
        return left

    def primary(self) -> _Expr:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if tok in _WORD_OPERATORS:
            raise TermSyntaxError(_RESERVED.format(tok), self.line)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise TermSyntaxError(f"unexpected {tok!r}", self.line)
        name = None
        if self.peek() == "[":
            self.take("[")
            name = self.take()
            if name in _WORD_OPERATORS:
                raise TermSyntaxError(_RESERVED.format(name), self.line)
            self.take("]")
        args: List[_Expr] = []
        if self.peek() == "(":
            self.take("(")
            args.append(self.expr())
            while self.peek() == ",":
                self.take(",")
                args.append(self.expr())
            self.take(")")
        if tok in self.unknowns and not args and name is None:
            return _Ref(tok)
        return _Node(tok, tuple(args), name)


def parse_equations(text: str) -> List[Tuple[str, _Expr, int]]:
    lines = [(n + 1, raw.split("#", 1)[0]) for n, raw in enumerate(text.splitlines())]
    lines = [(n, s) for n, s in lines if s.strip()]
    unknowns = set()
    for n, s in lines:
        if "=" not in s:
            raise TermSyntaxError("equation lines have the form `name = expr`", n)
        lhs = s.split("=", 1)[0].strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", lhs):
            raise TermSyntaxError(f"bad unknown name {lhs!r}", n)
        if lhs in _WORD_OPERATORS:
            raise TermSyntaxError(_RESERVED.format(lhs), n)
        if lhs in unknowns:
            raise EquationError(f"unknown {lhs!r} is defined twice (line {n})")
        unknowns.add(lhs)
    parsed = []
    for n, s in lines:
        lhs, rhs = s.split("=", 1)
        parser = _Parser(_tokenize(rhs, n), unknowns, n)
        body = parser.expr()
        if parser.peek() is not None:
            raise TermSyntaxError(f"trailing input {parser.peek()!r}", n)
        parsed.append((lhs.strip(), body, n))
    return parsed


def _collect_arities(body: _Expr, arities: Dict[str, int]) -> None:
    if isinstance(body, _Node):
        if arities.setdefault(body.symbol, len(body.args)) != len(body.args):
            raise EquationError(f"symbol {body.symbol!r} used with different arities")
        for a in body.args:
            _collect_arities(a, arities)


def from_equations(text: str, signature: Optional[Signature] = None, root: Optional[str] = None) -> TermAutomaton:
    """
    solve a guarded equation system.

    args:
        text: equations, one per line, `#` comments allowed
        signature: symbols to resolve against; inferred as a generic signature when omitted
        root: the unknown whose solution is returned (default: the first one)

    returns:
        TermAutomaton whose states are the unknowns plus one state per subterm node
    """
    equations = parse_equations(text)
    if not equations:
        raise EquationError("empty equation system")
    if signature is None:
        arities: Dict[str, int] = {}
        for _, body, _ in equations:
            _collect_arities(body, arities)
        signature = Signature.generic(arities)

    tau: Dict[str, Tuple[str, Tuple[str, ...]]] = {}
    names: Dict[str, str] = {}
    order: List[str] = []
    pending_omega: Dict[str, Optional[str]] = {}
    defined = {lhs for lhs, _, _ in equations}

    def symbol_for(node: _Node, line: int) -> str:
        if node.symbol == "Omega" and not node.args:
            return "Omega"
        if signature.declares(node.symbol):
            return node.symbol
        if not node.args and signature.letter_sort is not None:
            return node.symbol
        raise EquationError(f"line {line}: {node.symbol!r} is neither a symbol of {signature.name} nor a defined unknown")

    def build(node: _Expr, state: str, expected: Optional[str], line: int) -> str:
        if isinstance(node, _Ref):
            if node.name not in defined:
                raise EquationError(f"line {line}: undefined unknown {node.name!r}")
            return node.name
        symbol = symbol_for(node, line)
        order.append(state)
        if symbol == "Omega" and not signature.declares("Omega"):
            pending_omega[state] = expected
            tau[state] = ("Omega", ())
            return state
        spec = signature.spec(symbol)
        if spec.arity != len(node.args):
            raise EquationError(f"line {line}: {symbol} expects {spec.arity} arguments, got {len(node.args)}")
        sons = tuple(build(a, f"{state}.{i + 1}", spec.arg_sorts[i], line) for i, a in enumerate(node.args))
        tau[state] = (symbol, sons)
        if node.name is not None:
            names[state] = node.name
        return state

    for lhs, body, line in equations:
        if isinstance(body, _Ref):
            raise EquationError(f"line {line}: unguarded equation {lhs} = {body.name}")
        build(body, lhs, None, line)

    # Omega placeholders take the sort their parent expects
    expected_of: Dict[str, str] = {}
    for q, (symbol, sons) in tau.items():
        if symbol == "Omega" and q in pending_omega:
            continue
        spec = signature.spec(symbol)
        for s, sort in zip(sons, spec.arg_sorts):
            expected_of.setdefault(s, sort)
    for q, hint in pending_omega.items():
        sort = hint or expected_of.get(q) or signature.main_sort
        tau[q] = (signature.omega(sort), ())

    root_state = root or equations[0][0]
    if root_state not in tau:
        raise EquationError(f"undefined unknown {root_state!r}")
    automaton = TermAutomaton(order, root_state, tau, signature, names)
    live = set(automaton.reachable())
    automaton = TermAutomaton([q for q in order if q in live], root_state, {q: tau[q] for q in live}, signature, {q: n for q, n in names.items() if q in live})
    logger.debug(f"solved {len(equations)} equations into {len(automaton.states)} states")
    return automaton
