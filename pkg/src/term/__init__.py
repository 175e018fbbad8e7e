from .signature import ARRANGEMENT, F, F_PRIME, F_SECOND, SIGNATURES, Signature, SymbolSpec
from .finite_term import FiniteTerm, Position, app, dot, ext, ext2, letter, omega
from .automaton import TermAutomaton, as_automaton, pos_meet, term_leq, truncate
from .equations import from_equations

__all__ = [
    "ARRANGEMENT",
    "F",
    "F_PRIME",
    "F_SECOND",
    "SIGNATURES",
    "Signature",
    "SymbolSpec",
    "FiniteTerm",
    "Position",
    "app",
    "dot",
    "ext",
    "ext2",
    "letter",
    "omega",
    "TermAutomaton",
    "as_automaton",
    "pos_meet",
    "term_leq",
    "truncate",
    "from_equations",
]
