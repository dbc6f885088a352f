"""Orthogonal matching pursuit and LASSO, real or complex.

OMP sparsifies the denominator at each order; LASSO runs once on the full
(D, d) to decide how many atoms OMP may pick. Both accept complex
dictionaries; the L1 norm is the sum of complex moduli, so soft-thresholding
shrinks the modulus and keeps the phase. A real dictionary with a real
right-hand side stays real throughout, so real coefficients come back real.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from modalsparse.config import DEFAULT_LAMBDA_RATIO
from modalsparse.contracts import ValidationError

log = logging.getLogger(__name__)

# Relative score gap under which two columns count as tied.
TIE_RTOL = 1e-12
# Stop OMP once ‖r‖ falls below this fraction of ‖y‖.
OMP_RESIDUAL_RTOL = 1e-12
LASSO_MAX_SWEEPS = 10_000
LASSO_STEP_RTOL = 1e-8
# Entries below this fraction of ‖x‖_inf do not count towards k.
SUPPORT_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class SparseSolution:
    support: tuple[int, ...]
    values: np.ndarray
    residual_norm: float
    residual_history: tuple[float, ...] = ()

    def dense(self, n: int) -> np.ndarray:
        """Scatter ``values`` into a length-``n`` vector."""
        x = np.zeros(n, dtype=np.result_type(self.values, float))
        if self.support:
            x[list(self.support)] = self.values
        return x


@dataclass(frozen=True, eq=False)
class LassoResult:
    x: np.ndarray
    converged: bool
    sweeps: int
    support_history: tuple[int, ...]


@dataclass(frozen=True)
class SparsityEstimate:
    k: int
    lasso_lambda: float
    lasso_support_size_history: tuple[int, ...]
    converged: bool = True
    degenerate: bool = False


def _field(*arrays: np.ndarray | complex) -> type:
    return complex if any(np.iscomplexobj(a) for a in arrays) else float


def _column_norms(dictionary: np.ndarray) -> np.ndarray:
    return np.linalg.norm(dictionary, axis=0)


def omp_select(dictionary: np.ndarray, residual: np.ndarray, exclude: Iterable[int] = ()) -> int:
    """argmax_i |<phi_i, r>| / ‖phi_i‖ over eligible columns; lowest index on ties."""
    phi = np.asarray(dictionary, dtype=complex)
    r = np.asarray(residual, dtype=complex)
    if not np.any(r):
        raise ValidationError("residual is zero; nothing left to select")
    norms = _column_norms(phi)
    eligible = norms > 0
    excluded = list(exclude)
    if excluded:
        eligible[excluded] = False
    if not eligible.any():
        raise ValidationError("no eligible dictionary column", columns=phi.shape[1])
    scores = np.zeros(phi.shape[1])
    scores[eligible] = np.abs(phi[:, eligible].conj().T @ r) / norms[eligible]
    best = scores.max()
    # First index within round-off of the best score.
    return int(np.flatnonzero(eligible & (scores >= best * (1.0 - TIE_RTOL)))[0])


def omp_solve(dictionary: np.ndarray, y: np.ndarray, k: int) -> SparseSolution:
    """Greedy k-term least-squares fit of ``y``.

    Every step re-solves least squares on the whole active set, so the
    residual stays orthogonal to each active column. A column that would
    make the active set rank deficient is dropped and never offered again.
    """
    field = _field(dictionary, y)
    phi = np.asarray(dictionary, dtype=field)
    y = np.asarray(y, dtype=field).reshape(-1)
    n_cols = phi.shape[1]
    if phi.ndim != 2 or phi.shape[0] != len(y):
        raise ValidationError("dictionary rows must match y", rows=phi.shape[0], y=len(y))
    if not 1 <= k <= n_cols:
        raise ValidationError("k must lie in [1, number of columns]", k=k, columns=n_cols)

    y_norm = float(np.linalg.norm(y))
    support: list[int] = []
    ineligible: set[int] = {int(i) for i in np.flatnonzero(_column_norms(phi) == 0)}
    values = np.zeros(0, dtype=field)
    residual = y.copy()
    history = [y_norm]

    while len(support) < k:
        if history[-1] <= OMP_RESIDUAL_RTOL * y_norm:
            break
        if len(support) + len(ineligible) >= n_cols:
            break
        index = omp_select(phi, residual, exclude=[*support, *ineligible])
        trial = [*support, index]
        active = phi[:, trial]
        if np.linalg.matrix_rank(active) < len(trial):
            log.debug("OMP: column %d is dependent on the active set; skipping it", index)
            ineligible.add(index)
            continue
        values, *_ = scipy.linalg.lstsq(active, y)
        residual = y - active @ values
        support = trial
        history.append(float(np.linalg.norm(residual)))

    return SparseSolution(
        support=tuple(support),
        values=np.asarray(values, dtype=field),
        residual_norm=history[-1],
        residual_history=tuple(history),
    )


def soft_threshold(rho: np.ndarray | complex, t: float) -> np.ndarray:
    """rho · max(1 - t/|rho|, 0), phase kept."""
    rho = np.asarray(rho, dtype=_field(rho))
    magnitude = np.abs(rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(magnitude > 0, np.maximum(1.0 - t / magnitude, 0.0), 0.0)
    return rho * shrink


def lasso_objective(dictionary: np.ndarray, y: np.ndarray, x: np.ndarray, lam: float) -> float:
    residual = np.asarray(dictionary) @ x - y
    return 0.5 * float(np.vdot(residual, residual).real) + lam * float(np.abs(x).sum())


def kkt_residual(dictionary: np.ndarray, y: np.ndarray, x: np.ndarray, lam: float) -> float:
    """Worst violation of the LASSO optimality conditions.

    With g = Phi^H (Phi x - y): |g_i + lam x_i/|x_i|| on the support and
    max(|g_i| - lam, 0) off it.
    """
    phi = np.asarray(dictionary, dtype=complex)
    x = np.asarray(x, dtype=complex)
    g = phi.conj().T @ (phi @ x - y)
    magnitude = np.abs(x)
    active = magnitude > 0
    violations = np.maximum(np.abs(g) - lam, 0.0)
    violations[active] = np.abs(g[active] + lam * x[active] / magnitude[active])
    return float(violations.max()) if violations.size else 0.0


def lasso_solve(
    dictionary: np.ndarray,
    y: np.ndarray,
    lam: float,
    max_sweeps: int = LASSO_MAX_SWEEPS,
) -> LassoResult:
    """Cyclic coordinate descent for ½‖Phi x - y‖² + lam ‖x‖₁.

    Stops when a sweep moves no coordinate by more than 1e-8 (1 + ‖x‖_inf)
    and the KKT residual is down at round-off; at the sweep cap the last
    iterate comes back with ``converged=False``.
    """
    if not np.isfinite(lam) or lam < 0:
        raise ValidationError("lambda must be >= 0", lam=lam)
    field = _field(dictionary, y)
    phi = np.asarray(dictionary, dtype=field)
    y = np.asarray(y, dtype=field).reshape(-1)
    n_cols = phi.shape[1]
    norms2 = np.einsum("ij,ij->j", phi.conj(), phi).real
    x = np.zeros(n_cols, dtype=field)
    kkt_tol = 1e-7 * lam + 1e-10 * float(np.abs(phi.conj().T @ y).max(initial=0.0))

    history: list[int] = []
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        residual = y - phi @ x
        max_step = 0.0
        for i in range(n_cols):
            if norms2[i] == 0:
                continue
            column = phi[:, i]
            rho = np.vdot(column, residual) + norms2[i] * x[i]
            new = soft_threshold(rho, lam).item() / norms2[i]
            step = new - x[i]
            if step != 0:
                residual -= column * step
                x[i] = new
                max_step = max(max_step, abs(step))
        history.append(int(np.count_nonzero(x)))
        if max_step < LASSO_STEP_RTOL * (1.0 + float(np.abs(x).max(initial=0.0))):
            if kkt_residual(phi, y, x, lam) <= kkt_tol:
                converged = True
                break
    if not converged:
        log.warning("LASSO hit the %d-sweep cap; returning the last iterate", max_sweeps)
    return LassoResult(x=x, converged=converged, sweeps=sweeps, support_history=tuple(history))


def lambda_max(dictionary: np.ndarray, y: np.ndarray) -> float:
    """max_i |<phi_i, y>|: the smallest lam that zeroes every coordinate."""
    return float(np.abs(np.asarray(dictionary).conj().T @ y).max(initial=0.0))


def estimate_sparsity(
    d_mat: np.ndarray,
    d_vec: np.ndarray,
    lambda_ratio: float = DEFAULT_LAMBDA_RATIO,
) -> SparsityEstimate:
    """k = number of significant LASSO coefficients on (D, d), at least 1."""
    field = _field(d_mat, d_vec)
    d_mat = np.asarray(d_mat, dtype=field)
    d_vec = np.asarray(d_vec, dtype=field).reshape(-1)
    if d_mat.ndim != 2 or d_mat.shape[0] != d_mat.shape[1] or d_mat.shape[0] != len(d_vec):
        raise ValidationError("D must be square and match d", shape=str(d_mat.shape), d=len(d_vec))
    if not 0 < lambda_ratio < 1:
        raise ValidationError("lambda ratio must lie in (0, 1)", lambda_ratio=lambda_ratio)

    lam = lambda_ratio * lambda_max(d_mat, d_vec)
    result = lasso_solve(d_mat, d_vec, lam)
    peak = float(np.abs(result.x).max(initial=0.0))
    k = int(np.count_nonzero(np.abs(result.x) > SUPPORT_RTOL * peak)) if peak > 0 else 0
    degenerate = k == 0
    if degenerate:
        log.warning("LASSO returned all zeros; using k = 1")
        k = 1
    log.info("sparsity estimate: k=%d at lambda=%.3g (%d sweeps)", k, lam, result.sweeps)
    return SparsityEstimate(
        k=k,
        lasso_lambda=lam,
        lasso_support_size_history=result.support_history,
        converged=result.converged,
        degenerate=degenerate,
    )
