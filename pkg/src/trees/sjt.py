"""
structured join-trees and join-forests of unbounded degree: the two-sorted algebra over
F' (dot, union, ext, mkf and the two Omegas) and the value of terms over F'.
"""
from __future__ import annotations

from typing import Callable, Dict, Iterable, Optional, Sequence, Union

from loguru import logger

from src.errors import InvalidStructureError, SortError
from src.order_core import Node, Poset
from src.term import F_PRIME, FiniteTerm, TermAutomaton, as_automaton

from .sbjt import greedy_structuring
from .structured import StructuredForest, concat_trees, ext_forest, union_forests
from .valuation import LazyStructuredTree


class SJForest(StructuredForest):
    """an SJ-tree (sort t) or SJ-forest (sort f)."""

    kind = "sj"

    def __init__(self, poset: Poset, lines: Iterable[Iterable[Node]], sort: str = "t"):
        if sort not in ("t", "f"):
            raise SortError(f"SJ values have sort t or f, got {sort}")
        super().__init__(poset, lines, sort)


class LazySJTree(LazyStructuredTree):
    kind = "sj"

    def __init__(self, automaton: TermAutomaton):
        if automaton.signature != F_PRIME:
            raise SortError(f"expected a term over F', got {automaton.signature.name}")
        super().__init__(automaton)

    def _build(self, poset, lines, positions, ids) -> SJForest:
        return SJForest(poset, lines, self.sort)


def mkf(j: SJForest) -> SJForest:
    """the same triple read as a forest."""
    if j.sort != "t":
        raise SortError("mkf applies to trees")
    return j.rebuild(j.poset, j.lines, sort="f")


_OPERATIONS: Dict[str, Callable[..., SJForest]] = {
    "dot": concat_trees,
    "union": union_forests,
    "ext": lambda f, u: ext_forest(f, u, sort_in="f"),
    "mkf": mkf,
    "Omega_t": lambda: SJForest.empty("t"),
    "Omega_f": lambda: SJForest.empty("f"),
}


def sj_apply(op: str, *args) -> SJForest:
    """
    apply an operation of the algebra.

    args:
        op: one of dot, union, ext, mkf, Omega_t, Omega_f
        args: the operands; ext takes the forest then the fresh node id
    """
    if op not in _OPERATIONS:
        raise SortError(f"unknown operation {op!r} for SJ values")
    return _OPERATIONS[op](*args)


def val_sj(t: Union[FiniteTerm, TermAutomaton]) -> Union[SJForest, LazySJTree]:
    lazy = LazySJTree(as_automaton(t, F_PRIME))
    if lazy.is_finite():
        return lazy.materialize()
    return lazy


def evaluate_sj(t: FiniteTerm, position: str = "") -> SJForest:
    """bottom-up evaluation through the algebra, each ext named by its Dewey word."""
    sons = [evaluate_sj(c, position + str(i + 1)) for i, c in enumerate(t.children)]
    if t.symbol == "ext":
        return sj_apply("ext", sons[0], position)
    return sj_apply(t.symbol, *sons)


def structure_forest(p: Poset, enumeration: Optional[Sequence[Node]] = None, sort: Optional[str] = None) -> SJForest:
    """
    a structuring of any finite join-forest: per component, the axis from the root down
    through first enumerated children, then the maximal line through each first uncovered node.
    """
    if not p.is_join_forest():
        raise InvalidStructureError("order is not a join-forest")
    if sort is None:
        sort = "t" if len(p.maximal()) <= 1 else "f"
    enumeration = list(p.nodes) if enumeration is None else list(enumeration)
    j = SJForest(p, greedy_structuring(p, enumeration), sort)
    logger.debug(f"structured a forest of {len(p.maximal())} components into {len(j.lines)} lines")
    return j.check()
