"""Propagation-based systematic solver."""

from .domains import DomainStore
from .propagators import build_propagators, make_propagators
from .search import (
    EnumerationResult,
    SearchConfig,
    SearchStats,
    SolveOutcome,
    enumerate_all,
    optimize,
    propagate_to_fixpoint,
    solve,
)

__all__ = [
    "DomainStore",
    "EnumerationResult",
    "SearchConfig",
    "SearchStats",
    "SolveOutcome",
    "build_propagators",
    "make_propagators",
    "enumerate_all",
    "optimize",
    "propagate_to_fixpoint",
    "solve",
]
