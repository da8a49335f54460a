"""Separating varieties for simultaneous conjugation of matrix tuples."""

from .combinatorics import Composition, ParameterError, Permutation
from .poset import PosetElement, Regime, build_poset, component_report

__all__ = [
    "Composition",
    "ParameterError",
    "Permutation",
    "PosetElement",
    "Regime",
    "build_poset",
    "component_report",
]
