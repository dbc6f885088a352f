"""Characteristic roots and their continuous-time poles.

Roots come from the eigenvalues of the (balanced) companion matrix, then a
short Newton polish. With the basis Omega = exp(-j w T_s) a root z maps to

    lambda = -log(z) / T_s,   f = |lambda| / 2 pi,   zeta = -Re(lambda) / |lambda|,

so a physically stable pole (zeta > 0) sits OUTSIDE the unit circle. That is
the lever the sparse variant pulls: roots pushed inside |z| = 1 turn into
unstable poles and drop out of the diagram.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from modalsparse.config import DEFAULT_DEDUP_TOL
from modalsparse.contracts import ConvergenceError, ValidationError

log = logging.getLogger(__name__)

MONIC_TOL = 1e-12
POLISH_ITERATIONS = 5


def _polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Newton steps per root; a root stops at the first step that fails to lower |p|."""
    derivative = npoly.polyder(coeffs)
    z = roots.copy()
    value = np.abs(npoly.polyval(z, coeffs))
    active = value > 0
    for _ in range(POLISH_ITERATIONS):
        if not active.any():
            break
        slope = npoly.polyval(z[active], derivative)
        usable = slope != 0
        candidate = z[active].copy()
        candidate[usable] -= npoly.polyval(candidate[usable], coeffs) / slope[usable]
        candidate_value = np.abs(npoly.polyval(candidate, coeffs))
        better = usable & (candidate_value < value[active])
        index = np.flatnonzero(active)
        z[index[better]] = candidate[better]
        value[index[better]] = candidate_value[better]
        active[index[~better]] = False
    return z


def poly_roots(coeffs: Sequence[complex] | np.ndarray) -> np.ndarray:
    """All ``len(coeffs) - 1`` roots of a monic ascending polynomial.

    Zero low-order coefficients are stripped first and come back as exact
    zero roots. Real coefficients go through the real companion matrix, so
    complex roots come back as exact conjugate pairs.
    """
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if len(c) < 2:
        raise ValidationError("polynomial must have degree >= 1", length=len(c))
    if abs(c[-1] - 1) > MONIC_TOL:
        raise ValidationError("polynomial must be monic", top=str(c[-1]))
    n_zero = int(np.flatnonzero(c)[0])
    reduced = c[n_zero:]
    if len(reduced) == 1:
        return np.zeros(n_zero, dtype=complex)
    try:
        companion = reduced if np.any(reduced.imag) else reduced.real
        found = npoly.polyroots(companion).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"companion eigenvalue iteration failed: {exc}", degree=len(reduced) - 1
        ) from None
    return np.concatenate([np.zeros(n_zero, dtype=complex), _polish(reduced, found)])


@dataclass(frozen=True)
class Pole:
    z: complex
    lam: complex
    f_hz: float
    fd_hz: float
    zeta: float
    stable: bool

    def in_band(self, f_min: float, f_max: float) -> bool:
        """Positive-frequency member with f inside [f_min, f_max]."""
        return self.fd_hz > 0 and f_min <= self.f_hz <= f_max


def pole_from_root(z: complex, ts: float) -> Pole:
    if not ts > 0:
        raise ValidationError("sampling period must be > 0", ts=ts)
    z = complex(z)
    if z == 0:
        raise ValidationError("z = 0 has no continuous-time pole")
    lam = complex(-np.log(z) / ts)
    modulus = abs(lam)
    zeta = -lam.real / modulus if modulus > 0 else 0.0
    return Pole(
        z=z,
        lam=lam,
        f_hz=modulus / (2.0 * np.pi),
        fd_hz=lam.imag / (2.0 * np.pi),
        zeta=float(zeta),
        stable=bool(zeta > 0),
    )


def dedup_degenerate(
    poles: Sequence[Pole], rel_tol: float = DEFAULT_DEDUP_TOL
) -> tuple[list[Pole], int]:
    """Collapse poles whose z coincide within rel_tol · max(1, |z|).

    The first occurrence survives. Returns (kept, removed count).
    """
    if not rel_tol > 0:
        raise ValidationError("rel_tol must be > 0", rel_tol=rel_tol)
    kept: list[Pole] = []
    for pole in poles:
        tol = rel_tol * max(1.0, abs(pole.z))
        if any(abs(pole.z - other.z) <= tol for other in kept):
            continue
        kept.append(pole)
    removed = len(poles) - len(kept)
    if removed:
        log.debug("collapsed %d degenerate roots", removed)
    return kept, removed


def polynomial_poles(coeffs: np.ndarray, ts: float) -> tuple[list[Pole], int]:
    """Poles of every nonzero root, plus the number of roots at z = 0."""
    roots = poly_roots(coeffs)
    nonzero = roots[roots != 0]
    return [pole_from_root(z, ts) for z in nonzero], len(roots) - len(nonzero)
