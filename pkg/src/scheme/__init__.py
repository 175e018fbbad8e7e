"""
Description schemes of SBJ-, SJ- and SOJ-trees.
"""
from .base import DescribeReport, DescriptionScheme, Run, Unfolding, term_run
from .sbj_scheme import SBJScheme
from .sj_scheme import SJScheme
from .soj_scheme import SOJScheme
from .minimize import iso_schemes, minimize
from .scheme_service import SchemeService

__all__ = [
    "DescribeReport",
    "DescriptionScheme",
    "Run",
    "Unfolding",
    "term_run",
    "SBJScheme",
    "SJScheme",
    "SOJScheme",
    "iso_schemes",
    "minimize",
    "SchemeService",
]
