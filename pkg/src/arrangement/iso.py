"""
arrangement operations and the isomorphism oracle.

the oracle is sound: not_iso always comes with a certificate, iso is only claimed for
finite arrangements, equal expression normal forms, or normal forms inside the decided
fragment (finite words, u.v^w, v^-w.u, shuffles of letters). everything else is
unknown at the given bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Hashable, Optional, Tuple, Union

from loguru import logger

from src.errors import AlphabetMismatchError

from .base import Arrangement, Ordering
from .expression import Concat, Empty, RegularArrangementExpr, word_expr
from .finite import FiniteArrangement
from .labelled_set import LabelledSet
from .lazy import LazyArrangement

DEFAULT_BOUND = 64


class Verdict(Enum):
    ISO = "iso"
    NOT_ISO = "not_iso"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IsoResult:
    verdict: Verdict
    certificate: str = ""
    bound: Optional[int] = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.ISO

    def __str__(self) -> str:
        if self.verdict is Verdict.UNKNOWN:
            return f"unknown({self.bound})"
        return self.verdict.value if not self.certificate else f"{self.verdict.value}: {self.certificate}"


def concat(w1: Arrangement, w2: Arrangement) -> Arrangement:
    """w1 . w2; Omega on either side returns the other operand unchanged."""
    if _is_empty(w1):
        return w2
    if _is_empty(w2):
        return w1
    if isinstance(w1, FiniteArrangement) and isinstance(w2, FiniteArrangement):
        return w1.concat(w2)
    if isinstance(w1, (FiniteArrangement, RegularArrangementExpr)) and isinstance(w2, (FiniteArrangement, RegularArrangementExpr)):
        return Concat(as_expression(w1), as_expression(w2))
    return _lazy_concat(w1, w2)


def _is_empty(w: Arrangement) -> bool:
    if isinstance(w, FiniteArrangement):
        return len(w) == 0
    if isinstance(w, RegularArrangementExpr):
        return w.normal_form() == Empty()
    return False


def _lazy_concat(w1: Arrangement, w2: Arrangement) -> LazyArrangement:
    def enumerate_fn():
        a, b = w1.positions(), w2.positions()
        for left, right in _zip_longest(a, b):
            if left is not None:
                yield (0, left)
            if right is not None:
                yield (1, right)

    def compare_fn(u, v) -> Ordering:
        if u[0] != v[0]:
            return Ordering.LT if u[0] < v[0] else Ordering.GT
        return (w1 if u[0] == 0 else w2).compare(u[1], v[1])

    def label_fn(u):
        return (w1 if u[0] == 0 else w2).label_at(u[1])

    f1, f2 = w1.is_finite(), w2.is_finite()
    finite = (f1 and f2) if None not in (f1, f2) else (False if False in (f1, f2) else None)
    alphabet = None if w1.alphabet is None or w2.alphabet is None else w1.alphabet | w2.alphabet
    return LazyArrangement(enumerate_fn, compare_fn, label_fn, alphabet, None, finite)


def _zip_longest(a, b):
    sentinel = object()
    while True:
        x, y = next(a, sentinel), next(b, sentinel)
        if x is sentinel and y is sentinel:
            return
        yield (None if x is sentinel else x), (None if y is sentinel else y)


def relabel(r: Callable[[Hashable], Hashable], w: Arrangement) -> Arrangement:
    return w.relabel(r)


def to_labelled_set(w: Arrangement) -> LabelledSet:
    return w.labelled_set()


def as_expression(w: Union[FiniteArrangement, RegularArrangementExpr]) -> RegularArrangementExpr:
    if isinstance(w, RegularArrangementExpr):
        return w
    return word_expr(w.word)


def expression_of(w: Arrangement) -> Optional[RegularArrangementExpr]:
    """w as an expression when it is finite, an expression, or a frontier whose shape is recognised; else None."""
    if isinstance(w, RegularArrangementExpr):
        return w
    if isinstance(w, FiniteArrangement):
        return as_expression(w)
    source = getattr(w, "source", None)
    if source is not None:
        return source.expression()
    if isinstance(w, LazyArrangement) and w.is_finite():
        return as_expression(w.materialize())
    return None


def _word_of(w: Arrangement, bound: int) -> Optional[Tuple[Hashable, ...]]:
    """the letters of w in order when w is finite with at most `bound` positions."""
    if isinstance(w, FiniteArrangement):
        return w.word
    if isinstance(w, RegularArrangementExpr) and w.is_finite():
        return w.word()
    finite = w.is_finite()
    if finite is False:
        return None
    positions = list(w.positions(bound + 1))
    if finite is None and len(positions) > bound:
        return None
    if finite and len(positions) > bound:
        positions = list(w.positions())
    return tuple(w.label_at(p) for p in w.sort_positions(positions))


def _compare_words(a: Tuple, b: Tuple) -> IsoResult:
    if a == b:
        return IsoResult(Verdict.ISO)
    if len(a) != len(b):
        return IsoResult(Verdict.NOT_ISO, f"sizes {len(a)} and {len(b)}")
    i = next(k for k in range(len(a)) if a[k] != b[k])
    return IsoResult(Verdict.NOT_ISO, f"position {i} carries {a[i]!r} and {b[i]!r}")


def _invariants(w: Arrangement):
    source = getattr(w, "source", None)
    if source is None:
        return None
    return {
        "letters": source.letters(),
        "finite": source.is_finite(),
        "least": source.end(last=False),
        "greatest": source.end(last=True),
        "counts": source.counts(),
    }


def iso(w1: Arrangement, w2: Arrangement, bound: Optional[int] = None) -> IsoResult:
    """
    decide or bound the isomorphism of two arrangements.

    args:
        w1, w2: finite, expression or lazy arrangements
        bound: exploration budget for oracle-only arrangements

    returns:
        IsoResult with iso, not_iso (with certificate) or unknown(bound)
    """
    bound = DEFAULT_BOUND if bound is None else bound
    if w1.alphabet is not None and w2.alphabet is not None and w1.alphabet != w2.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {sorted(map(str, w1.alphabet))} vs {sorted(map(str, w2.alphabet))}")

    exprs = [expression_of(w) for w in (w1, w2)]
    if all(isinstance(e, RegularArrangementExpr) for e in exprs):
        n1, n2 = exprs[0].normal_form(), exprs[1].normal_form()
        if n1 == n2:
            return IsoResult(Verdict.ISO)
        k1, k2 = n1.kind(), n2.kind()
        if k1 is not None and k2 is not None:
            if k1 == k2 == "finite":
                return _compare_words(n1.word(), n2.word())
            return IsoResult(Verdict.NOT_ISO, f"normal forms {n1} and {n2} differ")

    word1, word2 = _word_of(w1, bound), _word_of(w2, bound)
    if word1 is not None and word2 is not None:
        return _compare_words(word1, word2)

    inv1, inv2 = _invariants(w1), _invariants(w2)
    if inv1 is not None and inv2 is not None:
        for key in ("finite", "letters", "least", "greatest", "counts"):
            if inv1[key] != inv2[key]:
                return IsoResult(Verdict.NOT_ISO, f"{key} differ: {inv1[key]} vs {inv2[key]}")
    elif (word1 is None) != (word2 is None) and (w1.is_finite() is not None or w2.is_finite() is not None):
        finite_side = word1 if word1 is not None else word2
        other = w2 if word1 is not None else w1
        if other.is_finite() is False:
            return IsoResult(Verdict.NOT_ISO, f"one side is finite ({len(finite_side)} positions), the other infinite")
    logger.warning(f"arrangement isomorphism undecided at bound {bound}")
    return IsoResult(Verdict.UNKNOWN, bound=bound)
