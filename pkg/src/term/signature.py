"""
signatures: symbols with argument sorts and a result sort.

the three tree signatures are F (binary join-trees), F_PRIME (join-trees and forests)
and F_SECOND (ordered join-trees and hedges). ARRANGEMENT is the signature of terms
whose frontier is an arrangement: a binary concatenation, Omega and open letters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

from src.errors import SortError

OP = "op"
EXT = "ext"
OMEGA = "omega"
LETTER = "letter"


@dataclass(frozen=True)
class SymbolSpec:
    name: str
    arg_sorts: Tuple[str, ...]
    sort: str
    kind: str = OP

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Signature:
    """
    a finite many-sorted signature.

    args:
        name: display name
        specs: the declared symbols
        letter_sort: when set, every undeclared nullary symbol is a letter of this sort
    """

    name: str
    specs: Tuple[SymbolSpec, ...]
    letter_sort: Optional[str] = None
    _by_name: Dict[str, SymbolSpec] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_name", {s.name: s for s in self.specs})

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._by_name or self.letter_sort is not None

    def spec(self, symbol: str) -> SymbolSpec:
        if symbol in self._by_name:
            return self._by_name[symbol]
        if self.letter_sort is not None:
            return SymbolSpec(symbol, (), self.letter_sort, LETTER)
        raise SortError(f"symbol {symbol!r} is not in signature {self.name}")

    def declares(self, symbol: str) -> bool:
        return symbol in self._by_name

    @property
    def sorts(self) -> Tuple[str, ...]:
        seen: Dict[str, None] = {}
        for s in self.specs:
            seen.setdefault(s.sort, None)
        return tuple(seen)

    @property
    def main_sort(self) -> str:
        return self.sorts[0]

    def omega(self, sort: str) -> str:
        for s in self.specs:
            if s.kind == OMEGA and s.sort == sort:
                return s.name
        raise SortError(f"signature {self.name} has no Omega of sort {sort!r}")

    def is_omega(self, symbol: str) -> bool:
        return symbol in self._by_name and self._by_name[symbol].kind == OMEGA

    def is_ext(self, symbol: str) -> bool:
        return symbol in self._by_name and self._by_name[symbol].kind == EXT

    def is_letter(self, symbol: str) -> bool:
        return self.spec(symbol).kind == LETTER

    @classmethod
    def generic(cls, arities: Mapping[str, int], name: str = "generic") -> "Signature":
        """single-sorted signature with the given arities plus Omega; nullary symbols are letters."""
        specs = [SymbolSpec(sym, ("t",) * n, "t", OP if n else LETTER) for sym, n in sorted(arities.items()) if sym != "Omega"]
        specs.append(SymbolSpec("Omega", (), "t", OMEGA))
        return cls(name, tuple(specs))


def _specs(*items: Tuple[str, Iterable[str], str, str]) -> Tuple[SymbolSpec, ...]:
    return tuple(SymbolSpec(n, tuple(a), s, k) for n, a, s, k in items)


F = Signature(
    "F",
    _specs(
        ("dot", ("t", "t"), "t", OP),
        ("ext", ("t",), "t", EXT),
        ("Omega", (), "t", OMEGA),
    ),
)

F_PRIME = Signature(
    "F'",
    _specs(
        ("dot", ("t", "t"), "t", OP),
        ("ext", ("f",), "t", EXT),
        ("Omega_t", (), "t", OMEGA),
        ("union", ("f", "f"), "f", OP),
        ("mkf", ("t",), "f", OP),
        ("Omega_f", (), "f", OMEGA),
    ),
)

F_SECOND = Signature(
    "F''",
    _specs(
        ("dot", ("t", "t"), "t", OP),
        ("ext2", ("h", "h"), "t", EXT),
        ("Omega_t", (), "t", OMEGA),
        ("otimes", ("h", "h"), "h", OP),
        ("mkh", ("t",), "h", OP),
        ("Omega_h", (), "h", OMEGA),
    ),
)

ARRANGEMENT = Signature(
    "A",
    _specs(
        ("dot", ("a", "a"), "a", OP),
        ("Omega", (), "a", OMEGA),
    ),
    letter_sort="a",
)

SIGNATURES: Dict[str, Signature] = {"F": F, "F'": F_PRIME, "F''": F_SECOND, "A": ARRANGEMENT}

# infix spellings used by the equation syntax
INFIX = {".": "dot", "U+": "union", "x": "otimes", "*": "otimes"}
