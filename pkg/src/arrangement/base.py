"""
abstract arrangement: a labelled linear order with an enumerator of its positions.
"""
from __future__ import annotations

import functools
from abc import ABC, abstractmethod
from enum import Enum
from typing import TYPE_CHECKING, Callable, FrozenSet, Hashable, Iterator, List, Optional

if TYPE_CHECKING:
    from .finite import FiniteArrangement
    from .labelled_set import LabelledSet

Letter = Hashable
Address = Hashable


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1

    def __int__(self) -> int:
        return self.value


def lex_compare(u: str, v: str) -> Ordering:
    """
    lexicographic order on Dewey words: a proper prefix comes first, otherwise the first
    differing digit decides.
    """
    if u == v:
        return Ordering.EQ
    return Ordering.LT if u < v else Ordering.GT


class Arrangement(ABC):
    """
    base class for finite, expression-defined and lazy arrangements.

    alphabet is the declared letter set, None when it is left implicit.
    """

    alphabet: Optional[FrozenSet[Letter]] = None

    @abstractmethod
    def positions(self, limit: Optional[int] = None) -> Iterator[Address]:
        """positions in fair enumeration order (not the arrangement order)."""

    @abstractmethod
    def compare(self, u: Address, v: Address) -> Ordering:
        pass

    @abstractmethod
    def label_at(self, u: Address) -> Letter:
        pass

    @abstractmethod
    def is_finite(self) -> Optional[bool]:
        """True or False when decidable, None otherwise."""

    @abstractmethod
    def labelled_set(self) -> "LabelledSet":
        pass

    def relabel(self, r: Callable[[Letter], Letter], alphabet: Optional[FrozenSet[Letter]] = None) -> "Arrangement":
        from .lazy import LazyArrangement

        return LazyArrangement.relabelled(self, r, alphabet)

    def sort_positions(self, addresses: List[Address]) -> List[Address]:
        return sorted(addresses, key=functools.cmp_to_key(lambda a, b: int(self.compare(a, b))))

    def window(self, center: Optional[Address] = None, k: int = 8) -> "FiniteArrangement":
        from .lazy import window

        return window(self, center, k)
