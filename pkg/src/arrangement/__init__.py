from .base import Arrangement, Ordering, lex_compare
from .labelled_set import OMEGA, LabelledSet, format_count, parse_count
from .finite import EMPTY, FiniteArrangement
from .lazy import FrontierSource, LazyArrangement, frontier, window
from .expression import (
    Concat,
    Empty,
    Letter,
    OmegaPower,
    OmegaRevPower,
    RegularArrangementExpr,
    Shuffle,
    eta_shuffle,
    omega_power,
    omega_rev_power,
    parse_expression,
    word_expr,
)
from .iso import IsoResult, Verdict, as_expression, concat, expression_of, iso, relabel, to_labelled_set

__all__ = [
    "Arrangement",
    "Ordering",
    "lex_compare",
    "OMEGA",
    "LabelledSet",
    "format_count",
    "parse_count",
    "EMPTY",
    "FiniteArrangement",
    "FrontierSource",
    "LazyArrangement",
    "frontier",
    "window",
    "Concat",
    "Empty",
    "Letter",
    "OmegaPower",
    "OmegaRevPower",
    "RegularArrangementExpr",
    "Shuffle",
    "eta_shuffle",
    "omega_power",
    "omega_rev_power",
    "parse_expression",
    "word_expr",
    "IsoResult",
    "Verdict",
    "as_expression",
    "concat",
    "expression_of",
    "iso",
    "relabel",
    "to_labelled_set",
]
