"""
finite arrangements, fully materialized.
"""
from __future__ import annotations

from typing import Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from src.errors import UnknownNodeError

from .base import Address, Arrangement, Letter, Ordering
from .labelled_set import LabelledSet


class FiniteArrangement(Arrangement):
    """
    a finite labelled linear order.

    args:
        positions: the positions in increasing order
        labels: position -> letter
        alphabet: declared letter set, defaults to the letters used
    """

    def __init__(self, positions: Sequence[Address], labels: Mapping[Address, Letter], alphabet: Optional[Iterable[Letter]] = None):
        self._positions: Tuple[Address, ...] = tuple(positions)
        self._rank: Dict[Address, int] = {p: i for i, p in enumerate(self._positions)}
        if len(self._rank) != len(self._positions):
            raise ValueError("repeated position")
        self._labels: Dict[Address, Letter] = {p: labels[p] for p in self._positions}
        self.alphabet: FrozenSet[Letter] = frozenset(self._labels.values()) if alphabet is None else frozenset(alphabet)

    @classmethod
    def from_word(cls, word: Iterable[Letter], alphabet: Optional[Iterable[Letter]] = None) -> "FiniteArrangement":
        letters = tuple(word)
        return cls(range(len(letters)), dict(enumerate(letters)), alphabet)

    @classmethod
    def simple(cls, positions: Sequence[Address]) -> "FiniteArrangement":
        """each position labelled by itself."""
        return cls(positions, {p: p for p in positions})

    @property
    def word(self) -> Tuple[Letter, ...]:
        return tuple(self._labels[p] for p in self._positions)

    @property
    def ordered_positions(self) -> Tuple[Address, ...]:
        return self._positions

    def __len__(self) -> int:
        return len(self._positions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteArrangement):
            return NotImplemented
        return self._positions == other._positions and self._labels == other._labels

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FiniteArrangement({' '.join(map(str, self.word)) or 'Omega'})"

    def is_simple(self) -> bool:
        return len(set(self._labels.values())) == len(self._labels)

    def positions(self, limit: Optional[int] = None) -> Iterator[Address]:
        return iter(self._positions if limit is None else self._positions[:limit])

    def compare(self, u: Address, v: Address) -> Ordering:
        try:
            a, b = self._rank[u], self._rank[v]
        except KeyError as e:
            raise UnknownNodeError(e.args[0]) from None
        return Ordering.EQ if a == b else (Ordering.LT if a < b else Ordering.GT)

    def label_at(self, u: Address) -> Letter:
        try:
            return self._labels[u]
        except KeyError:
            raise UnknownNodeError(u) from None

    def is_finite(self) -> bool:
        return True

    def labelled_set(self) -> LabelledSet:
        return LabelledSet.of(self.word)

    def relabel(self, r: Callable[[Letter], Letter], alphabet: Optional[Iterable[Letter]] = None) -> "FiniteArrangement":
        new_alphabet = alphabet if alphabet is not None else {r(a) for a in self.alphabet}
        return FiniteArrangement(self._positions, {p: r(a) for p, a in self._labels.items()}, new_alphabet)

    def concat(self, other: "FiniteArrangement") -> "FiniteArrangement":
        """positions are kept when disjoint, otherwise tagged 0/1 by side."""
        if set(self._positions) & set(other._positions):
            left = [(0, p) for p in self._positions]
            right = [(1, p) for p in other._positions]
            labels = {(0, p): a for p, a in self._labels.items()}
            labels.update({(1, p): a for p, a in other._labels.items()})
            return FiniteArrangement(left + right, labels, self.alphabet | other.alphabet)
        labels = dict(self._labels)
        labels.update(other._labels)
        return FiniteArrangement(self._positions + other._positions, labels, self.alphabet | other.alphabet)

    def __matmul__(self, other: "FiniteArrangement") -> "FiniteArrangement":
        return self.concat(other)


EMPTY = FiniteArrangement((), {})
