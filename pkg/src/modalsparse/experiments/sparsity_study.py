"""Random sparse polynomials and where their roots land.

Each trial draws the non-top coefficients of a monic degree-n polynomial
with real and imaginary parts uniform on (-s, s), keeps the ``nonzero``
largest by modulus, zeroes the rest and counts the roots strictly inside
the unit circle. Zeroed low-order coefficients leave exact roots at z = 0,
which count as inside.

The share of roots inside depends on s because the top coefficient is fixed
at 1: small coefficients let z^n dominate on the unit circle. The default s
comes from ``DEFAULT_STUDY_COEFF_SCALE``.

Trial seeds come from one generator seeded with ``seed`` and are shared by
every nonzero count, so the counts are compared on the same draws.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from modalsparse.config import DEFAULT_SEED, DEFAULT_STUDY_COEFF_SCALE
from modalsparse.contracts import ValidationError
from modalsparse.core.progress import ProgressFn, no_progress
from modalsparse.core.workers import map_ordered
from modalsparse.lscf.roots import poly_roots

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SparsityStudyResult:
    nonzero_count: int
    trials: int
    pct_inside_mean: float
    pct_inside_std: float


@dataclass(frozen=True, eq=False)
class TrialRoots:
    nonzero: int
    trial: int
    roots: np.ndarray


def sparse_poly_coeffs(
    degree: int, nonzero: int, seed: int, scale: float = DEFAULT_STUDY_COEFF_SCALE
) -> np.ndarray:
    """Ascending coefficients, monic top, ``nonzero`` dominant terms below it."""
    if not scale > 0:
        raise ValidationError("coefficient scale must be > 0", scale=scale)
    if degree < 1:
        raise ValidationError("degree must be >= 1", degree=degree)
    if not 1 <= nonzero <= degree:
        raise ValidationError("nonzero must lie in [1, degree]", nonzero=nonzero, degree=degree)
    rng = np.random.default_rng(seed)
    drawn = rng.uniform(-scale, scale, degree) + 1j * rng.uniform(-scale, scale, degree)
    keep = np.argsort(-np.abs(drawn), kind="stable")[:nonzero]
    coeffs = np.zeros(degree + 1, dtype=complex)
    coeffs[keep] = drawn[keep]
    coeffs[degree] = 1.0
    return coeffs


def random_sparse_poly_roots(
    degree: int, nonzero: int, seed: int, scale: float = DEFAULT_STUDY_COEFF_SCALE
) -> np.ndarray:
    return poly_roots(sparse_poly_coeffs(degree, nonzero, seed, scale))


def random_sparse_poly_trial(
    degree: int, nonzero: int, seed: int, scale: float = DEFAULT_STUDY_COEFF_SCALE
) -> float:
    """Fraction of roots with |z| < 1."""
    roots = random_sparse_poly_roots(degree, nonzero, seed, scale)
    return float(np.count_nonzero(np.abs(roots) < 1.0)) / degree


def trial_seeds(seed: int, trials: int) -> np.ndarray:
    if trials < 1:
        raise ValidationError("need at least one trial", trials=trials)
    return np.random.default_rng(seed).integers(0, 2**63 - 1, size=trials)


def run_sparsity_study(
    degree: int,
    nonzero_counts: list[int],
    trials: int,
    seed: int = DEFAULT_SEED,
    progress: ProgressFn = no_progress,
    workers: int | None = None,
    scale: float = DEFAULT_STUDY_COEFF_SCALE,
) -> list[SparsityStudyResult]:
    """Mean and population std (percent) of the inside fraction per count."""
    seeds = trial_seeds(seed, trials)
    total = len(nonzero_counts)
    progress(0, total, "sparsity study")
    results = []
    for done, nonzero in enumerate(nonzero_counts, start=1):
        fractions = np.array(
            map_ordered(lambda s: random_sparse_poly_trial(degree, nonzero, int(s), scale), seeds, workers)
        )
        result = SparsityStudyResult(
            nonzero_count=nonzero,
            trials=trials,
            pct_inside_mean=100.0 * float(fractions.mean()),
            pct_inside_std=100.0 * float(fractions.std(ddof=0)),
        )
        log.info(
            "degree %d, %d nonzero, scale %g: %.1f%% ± %.1f%% inside over %d trials",
            degree,
            nonzero,
            scale,
            result.pct_inside_mean,
            result.pct_inside_std,
            trials,
        )
        results.append(result)
        progress(done, total, f"nonzero={nonzero}")
    return results


def sparsity_root_cloud(
    degree: int,
    nonzero_counts: list[int],
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    scale: float = DEFAULT_STUDY_COEFF_SCALE,
) -> list[TrialRoots]:
    """Every root of every trial, for complex-plane scatter plots."""
    seeds = trial_seeds(seed, trials)
    cloud = []
    for nonzero in nonzero_counts:
        per_trial = map_ordered(
            lambda s: random_sparse_poly_roots(degree, nonzero, int(s), scale), seeds, workers
        )
        cloud.extend(
            TrialRoots(nonzero=nonzero, trial=trial, roots=roots)
            for trial, roots in enumerate(per_trial)
        )
    return cloud
