"""Order sweeps and what is read off the resulting stability diagrams."""

from .diagram import (
    DiagramEntry,
    ExtractedMode,
    Method,
    OrderRow,
    PoleStats,
    StabilityDiagram,
    extract_modes,
    mark_consistency,
    pole_stats,
    spurious_count,
)
from .sweep import omp_order_solver, run_conventional, run_omp

__all__ = [
    "DiagramEntry",
    "ExtractedMode",
    "Method",
    "OrderRow",
    "PoleStats",
    "StabilityDiagram",
    "extract_modes",
    "mark_consistency",
    "pole_stats",
    "spurious_count",
    "omp_order_solver",
    "run_conventional",
    "run_omp",
]
