"""
command service: one handler per command-line verb. handlers only parse inputs, call the library
and format its answers; they return an exit status and the report text.
"""
import argparse
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

from loguru import logger

from src.arrangement import Verdict
from src.dot import graph_to_dot, layout_to_dot, poset_to_dot, structured_to_dot
from src.errors import EquationError, FormatError, JoinForestError
from src.formats import (
    parse_betweenness,
    parse_graph,
    parse_layout,
    parse_scheme,
    parse_structured,
    write_listing,
    write_poset,
    write_scheme,
)
from src.quasitree import ON_A_LINE, check_axioms, median, order_from_betweenness, root_order, structure_quasi_tree
from src.rankwidth import cut_rank, discrete_rankwidth
from src.scheme import Run, SchemeService
from src.settings import Settings, get_settings
from src.term import F, F_PRIME, F_SECOND, SIGNATURES, TermAutomaton, from_equations, truncate
from src.trees import LazySBJTree, LazySJTree, LazySOJTree, LazyStructuredTree

OK, VIOLATION, UNKNOWN, INPUT_ERROR = 0, 1, 2, 3

Outcome = Tuple[int, str]

_LAZY = {"sbj": LazySBJTree, "sj": LazySJTree, "soj": LazySOJTree}
_SIGNATURE_OF_KIND = {"sbj": F, "sj": F_PRIME, "soj": F_SECOND}
_KIND_OF_SIGNATURE = {"F": "sbj", "F'": "sj", "F''": "soj"}


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror or e}") from e


class CommandService:
    """
    dispatches parsed command lines to verb handlers.

    args:
        settings: bounds and defaults; command-line flags take precedence
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.handlers: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
            "eval": self.eval,
            "truncate": self.truncate,
            "scheme": self.scheme,
            "unfold": self.unfold,
            "describe": self.describe,
            "minimize": self.minimize,
            "iso": self.iso,
            "axioms": self.axioms,
            "order": self.order,
            "root": self.root,
            "median": self.median,
            "rankwidth": self.rankwidth,
            "cutrank": self.cutrank,
            "dot": self.dot,
        }
        self.schemes = SchemeService()
        logger.debug(f"command service initialized with {len(self.handlers)} verbs")

    def run(self, args: argparse.Namespace) -> Outcome:
        """
        run one verb.

        returns:
            (exit status, report text): 0 ok, 1 violation or not_iso, 2 unknown at the bound,
            3 input error
        """
        handler = self.handlers.get(args.verb)
        if handler is None:
            logger.error(f"unknown verb '{args.verb}'")
            return INPUT_ERROR, ""
        for flag in ("depth", "width", "bound", "sample"):
            value = getattr(args, flag, None)
            if value is not None and value <= 0:
                logger.error(f"--{flag} must be positive, got {value}")
                return INPUT_ERROR, ""
        try:
            return handler(args)
        except (FormatError, EquationError) as e:
            logger.error(str(e))
            return INPUT_ERROR, ""
        except JoinForestError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return VIOLATION, ""

    # helpers

    def _automaton(self, path: str, signature_name: str) -> TermAutomaton:
        if signature_name not in SIGNATURES:
            raise FormatError(f"unknown signature {signature_name!r}")
        return from_equations(_read(path), SIGNATURES[signature_name])

    def _lazy(self, path: str, kind: str) -> LazyStructuredTree:
        return _LAZY[kind](from_equations(_read(path), _SIGNATURE_OF_KIND[kind]))

    def _kind(self, args: argparse.Namespace) -> str:
        kind = getattr(args, "kind", None) or self.settings.default_scheme_kind
        self.schemes.set_kind(kind)
        return self.schemes.kind

    # terms and values

    def eval(self, args: argparse.Namespace) -> Outcome:
        kind = _KIND_OF_SIGNATURE.get(args.signature)
        if kind is None:
            raise FormatError(f"values are defined over F, F' or F'', got {args.signature!r}")
        lazy = self._lazy(args.file, kind)
        if lazy.is_finite():
            return OK, write_listing(lazy.materialize())
        depth = args.depth or self.settings.eval_depth
        logger.warning(f"infinite value, showing the nodes of depth below {depth}")
        return OK, f"# truncated at depth {depth}\n" + write_listing(lazy.materialize(depth))

    def truncate(self, args: argparse.Namespace) -> Outcome:
        a = self._automaton(args.file, args.signature)
        return OK, f"{truncate(a, args.depth or self.settings.eval_depth)}\n"

    # schemes

    def scheme(self, args: argparse.Namespace) -> Outcome:
        kind = self._kind(args)
        scheme, _ = self.schemes.of_term(from_equations(_read(args.file), _SIGNATURE_OF_KIND[kind]))
        return OK, write_scheme(scheme)

    def unfold(self, args: argparse.Namespace) -> Outcome:
        scheme = parse_scheme(_read(args.file))
        u = scheme.unfold(args.depth or self.settings.unfold_depth, args.width or self.settings.unfold_width)
        status = "complete" if u.complete else f"truncated at depth {u.depth_bound}, width {u.width_bound}"
        return OK, f"# {status}\n" + write_listing(u.tree)

    def describe(self, args: argparse.Namespace) -> Outcome:
        scheme = parse_scheme(_read(args.scheme))
        bound = args.bound or self.settings.describe_bound
        if args.file.endswith(".eq"):
            lazy = self._lazy(args.file, scheme.kind)
            run = Run.of_states(self._state_map(args.run) if args.run else None)
            report = scheme.describes(lazy, run, bound)
        else:
            if not args.run:
                raise FormatError("describing a finite tree needs --run")
            j = parse_structured(_read(args.file))
            report = scheme.describes(j, self._run_of_tree(args.run, j), bound)
        if not report.ok:
            return VIOLATION, f"{report}\n"
        return (OK if report.up_to_bound is None else UNKNOWN), f"{report}\n"

    def _state_map(self, path: str) -> Dict[str, str]:
        """`state <from> <to>` records."""
        mapping = {}
        for n, raw in enumerate(_read(path).splitlines(), start=1):
            tokens = raw.split("#", 1)[0].split()
            if not tokens:
                continue
            if len(tokens) != 3 or tokens[0] != "state":
                raise FormatError("expected `state <term state> <scheme state>`", n)
            mapping[tokens[1]] = tokens[2]
        return mapping

    def _run_of_tree(self, path: str, j) -> Run:
        """`state x q` labels node x, `dir x d` labels the line through x."""
        states, directions = {}, {}
        for n, raw in enumerate(_read(path).splitlines(), start=1):
            tokens = raw.split("#", 1)[0].split()
            if not tokens:
                continue
            if len(tokens) != 3 or tokens[0] not in ("state", "dir"):
                raise FormatError("expected `state <node> <state>` or `dir <node> <direction>`", n)
            if tokens[1] not in j:
                raise FormatError(f"unknown node {tokens[1]!r}", n)
            if tokens[0] == "state":
                states[tokens[1]] = tokens[2]
            else:
                directions[frozenset(j.line_of(tokens[1]))] = tokens[2]
        return Run(states, directions or None)

    def minimize(self, args: argparse.Namespace) -> Outcome:
        return OK, write_scheme(self.schemes.minimize(parse_scheme(_read(args.file))))

    def iso(self, args: argparse.Namespace) -> Outcome:
        s1, s2 = parse_scheme(_read(args.first)), parse_scheme(_read(args.second))
        result = self.schemes.iso(s1, s2, args.depth, args.width)
        status = {Verdict.ISO: OK, Verdict.NOT_ISO: VIOLATION, Verdict.UNKNOWN: UNKNOWN}[result.verdict]
        return status, f"{result}\n"

    # quasi-trees

    def axioms(self, args: argparse.Namespace) -> Outcome:
        s = parse_betweenness(_read(args.file))
        mode = "sampled" if args.sample else "exhaustive"
        report = check_axioms(s, mode, args.sample, args.seed)
        return (OK if report.is_quasi_tree else VIOLATION), f"{report}\n"

    def order(self, args: argparse.Namespace) -> Outcome:
        s = parse_betweenness(_read(args.file))
        a, b = args.anchors
        return OK, " < ".join(map(str, order_from_betweenness(s, a, b))) + "\n"

    def root(self, args: argparse.Namespace) -> Outcome:
        s = parse_betweenness(_read(args.file))
        if args.structure:
            return OK, write_listing(structure_quasi_tree(s, args.node))
        return OK, write_poset(root_order(s, args.node))

    def median(self, args: argparse.Namespace) -> Outcome:
        s = parse_betweenness(_read(args.file))
        m = median(s, *args.nodes)
        return OK, f"{ON_A_LINE if m == ON_A_LINE else m}\n"

    # graphs

    def rankwidth(self, args: argparse.Namespace) -> Outcome:
        g = parse_graph(_read(args.file))
        width, layout = discrete_rankwidth(g, args.max_n)
        edges = "\n".join(f"  {u} -- {v}" for u, v in sorted(layout.edges, key=repr))
        return OK, f"rank-width {width}\nlayout:\n{edges}\n" if edges else f"rank-width {width}\n"

    def cutrank(self, args: argparse.Namespace) -> Outcome:
        g = parse_graph(_read(args.file))
        return OK, f"{cut_rank(g, args.U, args.W)}\n"

    def dot(self, args: argparse.Namespace) -> Outcome:
        kind = args.input_type or Path(args.file).suffix.lstrip(".")
        text = _read(args.file)
        if kind in ("tree", "sbj", "sj", "soj"):
            return OK, structured_to_dot(parse_structured(text))
        if kind in ("btw", "betweenness"):
            s = parse_betweenness(text)
            r = args.root or s.nodes[0]
            return OK, poset_to_dot(root_order(s, r), name=f"rooted at {r}")
        if kind in ("graph", "edges"):
            g = parse_graph(text)
            if args.layout:
                return OK, layout_to_dot(g, parse_layout(_read(args.layout), g))
            if args.plain:
                return OK, graph_to_dot(g)
            width, t = discrete_rankwidth(g, args.max_n)
            return OK, layout_to_dot(g, t, rank=width)
        if kind == "scheme":
            scheme = parse_scheme(text)
            u = scheme.unfold(args.depth or self.settings.unfold_depth, args.width or self.settings.unfold_width)
            return OK, structured_to_dot(u.tree, name="unfolding")
        raise FormatError(f"cannot tell what {args.file} holds; pass --as tree|btw|graph|scheme")
