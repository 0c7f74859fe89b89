"""Interleaving distances, bottleneck matchings and refinements for persistence
modules over weighted finite chains."""

from ._kernels import BACKEND
from .intervals import Interval, act, pairwise_distance, width
from .poset import Translation, WeightedPoset, candidate_heights, maximal_translation

__all__ = [
    "BACKEND",
    "Interval",
    "Translation",
    "WeightedPoset",
    "act",
    "candidate_heights",
    "maximal_translation",
    "pairwise_distance",
    "width",
]
