"""
labelled sets: multisets over an alphabet with counts in N plus omega.
"""
from __future__ import annotations

import math
from typing import Dict, Hashable, Iterable, Iterator, Mapping, Tuple, Union

from src.errors import FormatError

OMEGA = math.inf
Count = Union[int, float]


def format_count(n: Count) -> str:
    return "w" if n == OMEGA else str(int(n))


def parse_count(text: str) -> Count:
    if text in ("w", "omega"):
        return OMEGA
    try:
        value = int(text)
    except ValueError:
        raise FormatError(f"bad multiplicity {text!r}") from None
    if value < 0:
        raise FormatError(f"negative multiplicity {text!r}")
    return value


class LabelledSet:
    """
    letter -> multiplicity; zero counts are dropped so equality is per-letter.

    args:
        counts: mapping or (letter, count) pairs; repeated letters add up
    """

    def __init__(self, counts: Union[Mapping[Hashable, Count], Iterable[Tuple[Hashable, Count]]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        merged: Dict[Hashable, Count] = {}
        for letter, n in items:
            if n < 0:
                raise ValueError(f"negative count for {letter!r}")
            merged[letter] = merged.get(letter, 0) + n
        self._counts = {a: n for a, n in merged.items() if n}

    @classmethod
    def of(cls, letters: Iterable[Hashable]) -> "LabelledSet":
        return cls((a, 1) for a in letters)

    @classmethod
    def parse(cls, text: str) -> "LabelledSet":
        """`d1:3 d2:w` syntax"""
        pairs = []
        for item in text.split():
            letter, _, count = item.partition(":")
            if not letter or not count:
                raise FormatError(f"expected letter:count, got {item!r}")
            pairs.append((letter, parse_count(count)))
        return cls(pairs)

    def __getitem__(self, letter: Hashable) -> Count:
        return self._counts.get(letter, 0)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.letters())

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelledSet):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __add__(self, other: "LabelledSet") -> "LabelledSet":
        return LabelledSet(list(self._counts.items()) + list(other._counts.items()))

    def __repr__(self) -> str:
        return f"LabelledSet({self})"

    def __str__(self) -> str:
        return " ".join(f"{a}:{format_count(n)}" for a, n in self.items())

    def letters(self) -> Tuple[Hashable, ...]:
        try:
            return tuple(sorted(self._counts))
        except TypeError:
            return tuple(sorted(self._counts, key=repr))

    def items(self) -> Tuple[Tuple[Hashable, Count], ...]:
        return tuple((a, self._counts[a]) for a in self.letters())

    def total(self) -> Count:
        return sum(self._counts.values())

    def is_finite(self) -> bool:
        return OMEGA not in self._counts.values()

    def relabel(self, r) -> "LabelledSet":
        return LabelledSet((r(a), n) for a, n in self._counts.items())

    def elements(self, width: int) -> Tuple[Tuple[Hashable, int], ...]:
        """the multiset realised as (letter, copy) pairs; omega counts truncated to width copies."""
        out = []
        for a, n in self.items():
            copies = width if n == OMEGA else min(int(n), width)
            out.extend((a, i) for i in range(copies))
        return tuple(out)
