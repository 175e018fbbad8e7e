"""
finite terms as explicit trees, with Dewey-word positions (digits are 1-based).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from src.errors import PositionError, SortError
from src.term.signature import Signature

Position = str


@dataclass(frozen=True)
class FiniteTerm:
    """
    a finite term.

    args:
        symbol: the head symbol
        children: argument subterms
        name: optional node name carried by ext occurrences (ext[a](...))
    """

    symbol: str
    children: Tuple["FiniteTerm", ...] = ()
    name: Optional[str] = None

    def __str__(self) -> str:
        if self.symbol == "dot" and len(self.children) == 2:
            return f"({self.children[0]} . {self.children[1]})"
        if self.symbol in ("union", "otimes") and len(self.children) == 2:
            op = "U+" if self.symbol == "union" else "x"
            return f"({self.children[0]} {op} {self.children[1]})"
        head = self.symbol if self.name is None else f"{self.symbol}[{self.name}]"
        if not self.children:
            return head
        return f"{head}({', '.join(str(c) for c in self.children)})"

    def at(self, u: Position) -> "FiniteTerm":
        node = self
        for k, digit in enumerate(u):
            i = int(digit) - 1
            if not 0 <= i < len(node.children):
                raise PositionError(f"position {u!r} leaves the term at {u[:k]!r}")
            node = node.children[i]
        return node

    def symbol_at(self, u: Position) -> str:
        return self.at(u).symbol

    def positions(self) -> Iterator[Tuple[Position, "FiniteTerm"]]:
        """preorder walk yielding (position, subterm)."""
        stack: List[Tuple[Position, FiniteTerm]] = [("", self)]
        while stack:
            u, node = stack.pop()
            yield u, node
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((u + str(i + 1), node.children[i]))

    @property
    def size(self) -> int:
        return sum(1 for _ in self.positions())

    @property
    def height(self) -> int:
        return 1 + max((c.height for c in self.children), default=0)

    def sort(self, signature: Signature) -> str:
        return signature.spec(self.symbol).sort

    def check(self, signature: Signature) -> List[str]:
        """arity and sort errors, one message per offending position."""
        errors: List[str] = []
        for u, node in self.positions():
            try:
                spec = signature.spec(node.symbol)
            except SortError as e:
                errors.append(f"{u or 'root'}: {e}")
                continue
            if spec.arity != len(node.children):
                errors.append(f"{u or 'root'}: {node.symbol} expects {spec.arity} arguments, got {len(node.children)}")
                continue
            for i, (child, expected) in enumerate(zip(node.children, spec.arg_sorts)):
                try:
                    got = child.sort(signature)
                except SortError:
                    continue
                if got != expected:
                    errors.append(f"{u + str(i + 1)}: sort {got} where {node.symbol} expects {expected}")
        return errors


def app(symbol: str, *children: FiniteTerm, name: Optional[str] = None) -> FiniteTerm:
    return FiniteTerm(symbol, tuple(children), name)


def dot(left: FiniteTerm, right: FiniteTerm) -> FiniteTerm:
    return FiniteTerm("dot", (left, right))


def ext(child: FiniteTerm, name: Optional[str] = None, symbol: str = "ext") -> FiniteTerm:
    return FiniteTerm(symbol, (child,), name)


def ext2(left: FiniteTerm, right: FiniteTerm, name: Optional[str] = None) -> FiniteTerm:
    return FiniteTerm("ext2", (left, right), name)


def omega(symbol: str = "Omega") -> FiniteTerm:
    return FiniteTerm(symbol)


def letter(a: str) -> FiniteTerm:
    return FiniteTerm(a)
