"""
joinforest: join-trees with structurings, regular terms and their values, description schemes,
quasi-trees and rank-width.
"""
from .errors import JoinForestError
from .settings import get_settings

__all__ = [
    "JoinForestError",
    "get_settings",
]
