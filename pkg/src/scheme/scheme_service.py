"""
scheme service module: one entry point for the three scheme kinds.
"""
from typing import Callable, Dict, Mapping, Optional, Tuple, Type, Union

from loguru import logger

from src.arrangement import IsoResult
from src.settings import get_settings
from src.term import FiniteTerm, TermAutomaton
from src.trees import LazyStructuredTree, StructuredForest

from .base import DescribeReport, DescriptionScheme, Run, Unfolding
from .minimize import iso_schemes, minimize
from .sbj_scheme import SBJScheme
from .sj_scheme import SJScheme
from .soj_scheme import SOJScheme


class SchemeService:
    """
    dispatches scheme operations to the SBJ, SJ or SOJ implementation.

    args:
        kind: scheme kind to use ("sbj", "sj" or "soj"), default from settings
    """

    def __init__(self, kind: Optional[str] = None):
        self.schemes: Dict[str, Type[DescriptionScheme]] = {
            "sbj": SBJScheme,
            "sj": SJScheme,
            "soj": SOJScheme,
        }
        self.kind = self._resolve(kind or get_settings().default_scheme_kind)
        logger.debug(f"scheme service initialized with {self.kind} schemes")

    def _resolve(self, kind: str) -> str:
        kind = kind.lower()
        if kind not in self.schemes:
            logger.warning(f"unknown scheme kind '{kind}', falling back to sbj")
            return "sbj"
        return kind

    @property
    def scheme_class(self) -> Type[DescriptionScheme]:
        return self.schemes[self.kind]

    def set_kind(self, kind: str) -> None:
        if kind.lower() not in self.schemes:
            logger.warning(f"unknown scheme kind '{kind}', ignoring request")
            return
        self.kind = kind.lower()
        logger.debug(f"changed scheme kind to {self.kind}")

    def for_tree(self, j: Union[StructuredForest, LazyStructuredTree]) -> "SchemeService":
        """switch to the kind matching a structured tree."""
        self.set_kind(j.kind)
        return self

    def standard(self, j: StructuredForest) -> Tuple[DescriptionScheme, Run]:
        """
        the standard scheme of a finite structured tree and its identity run.

        args:
            j: an SBJ-tree, SJ-tree or SOJ-tree; the service kind follows the tree
        """
        self.for_tree(j)
        return self.scheme_class.standard(j)

    def of_term(
        self,
        t: Union[FiniteTerm, TermAutomaton],
        h: Optional[Union[Mapping, Callable]] = None,
        h_dir: Optional[Union[Mapping, Callable]] = None,
    ) -> Tuple[DescriptionScheme, Run]:
        if self.kind == "sbj":
            return SBJScheme.of_term(t, h)
        return self.scheme_class.of_term(t, h, h_dir)

    def describes(
        self,
        scheme: DescriptionScheme,
        j: Union[StructuredForest, LazyStructuredTree],
        run: Run,
        bound: Optional[int] = None,
    ) -> DescribeReport:
        report = scheme.describes(j, run, bound)
        logger.debug(f"describes: {report}")
        return report

    def unfold(self, scheme: DescriptionScheme, depth: Optional[int] = None, width: Optional[int] = None) -> Unfolding:
        return scheme.unfold(depth, width)

    def minimize(self, scheme: DescriptionScheme) -> DescriptionScheme:
        return minimize(scheme)

    def iso(self, s1: DescriptionScheme, s2: DescriptionScheme, depth: Optional[int] = None, width: Optional[int] = None) -> IsoResult:
        return iso_schemes(s1, s2, depth, width)
