"""Analytic FRFs from a modal model, and the multiplicative noise model.

The synthesizer stands in for a measured or simulated harmonic response: it
evaluates the standard modal superposition

    H_o(jw) = sum_r  R_or / (jw - lambda_r)  +  conj(R_or) / (jw - conj(lambda_r))

whose conjugate-pair form guarantees a real impulse response. Residues are
free parameters; no physical scaling (compliance vs inertance) is implied.
"""

from __future__ import annotations

import numpy as np

from modalsparse.contracts import ValidationError
from modalsparse.frf.data import FrequencyGrid, FrfSet, ModalModel


def modal_superposition(model: ModalModel, omega: np.ndarray, n_outputs: int | None = None) -> np.ndarray:
    """The superposition at arbitrary angular frequencies (negatives included).

    Returns n_o × len(omega). An empty model gives zeros with ``n_outputs``
    rows (default 1).
    """
    omega = np.asarray(omega, dtype=float)
    rows = model.n_outputs if model.n_outputs is not None else (n_outputs or 1)
    if n_outputs is not None and model.n_outputs is not None and n_outputs != model.n_outputs:
        raise ValidationError(
            "model residues do not match the requested output count",
            residues=model.n_outputs,
            n_outputs=n_outputs,
        )
    h = np.zeros((rows, omega.size), dtype=complex)
    jw = 1j * omega
    for mode in model.modes:
        pole = mode.pole
        direct = 1.0 / (jw - pole)
        mirror = 1.0 / (jw - np.conj(pole))
        h += np.outer(mode.residues, direct) + np.outer(np.conj(mode.residues), mirror)
    return h


def synthesize_frf(model: ModalModel, grid: FrequencyGrid, n_outputs: int | None = None) -> FrfSet:
    """Noise-free FRF set of ``model`` on ``grid``."""
    return FrfSet(grid=grid, h=modal_superposition(model, grid.omega, n_outputs))


def inject_noise(frf: FrfSet, alpha: float, seed: int) -> FrfSet:
    """H_hat = (1 + alpha sigma) H, sigma ~ N(0, 1) per output and per line.

    The sign of the perturbation comes from the signed normal draw. Equal
    seeds give bit-identical output; ``alpha == 0`` returns ``frf`` itself.
    """
    if not np.isfinite(alpha) or alpha < 0:
        raise ValidationError("noise level alpha must be >= 0", alpha=alpha)
    if alpha == 0:
        return frf
    sigma = np.random.default_rng(seed).standard_normal(frf.h.shape)
    return FrfSet(grid=frf.grid, h=(1.0 + alpha * sigma) * frf.h, weights=frf.weights)
