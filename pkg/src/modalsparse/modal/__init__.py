"""Mode shapes, re-synthesis and the comparison metrics."""

from .post import (
    MacMatrix,
    ModePairing,
    compare_modes,
    curve_fit_mse,
    damping_sensitivity,
    estimate_mode_shapes,
    mac,
    resynthesize,
)

__all__ = [
    "MacMatrix",
    "ModePairing",
    "compare_modes",
    "curve_fit_mse",
    "damping_sensitivity",
    "estimate_mode_shapes",
    "mac",
    "resynthesize",
]
