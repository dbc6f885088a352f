"""From identified poles to mode shapes, and the checks run on the result.

Residues are fitted with the poles held fixed: for each output the FRF is
a linear combination of the pole-pair basis

    R / (jw - lambda) + conj(R) / (jw - conj(lambda)) = u (b + c) + v j (b - c),

with b, c the two partial fractions and R = u + jv, so a real least-squares
problem on the stacked real and imaginary parts gives (u, v) directly. No
residual (out-of-band) terms are included.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly
import scipy.linalg

from modalsparse.contracts import GridMismatchError, NearMultipleRootError, ValidationError
from modalsparse.frf.data import FrequencyGrid, FrfSet, ModalModel, Mode
from modalsparse.frf.synthesis import synthesize_frf
from modalsparse.lscf.kernel import CharPolynomial
from modalsparse.lscf.roots import poly_roots

log = logging.getLogger(__name__)

# Basis condition number above which the residue fit gets a ridge term.
RIDGE_CONDITION = 1e12
RIDGE_SCALE = 1e-10
SIMPLE_ROOT_TOL = 1e-12
NEAR_ROOT_RTOL = 1e-6
# Widest relative frequency gap at which two modes still pair up.
MATCH_REL_GAP = 0.1


def _real_basis(omega: np.ndarray, poles: np.ndarray) -> np.ndarray:
    """2 n_f × 2 m real design matrix: columns u_r then v_r."""
    jw = 1j * omega[:, np.newaxis]
    b = 1.0 / (jw - poles[np.newaxis, :])
    c = 1.0 / (jw - np.conj(poles)[np.newaxis, :])
    complex_basis = np.hstack([b + c, 1j * (b - c)])
    return np.vstack([complex_basis.real, complex_basis.imag])


def _least_squares(basis: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    condition = float(np.linalg.cond(basis))
    if not np.isfinite(condition) or condition > RIDGE_CONDITION:
        gram = basis.T @ basis
        ridge = RIDGE_SCALE * float(np.trace(gram))
        log.warning(
            "residue basis is ill-conditioned (cond=%.3g); adding ridge %.3g", condition, ridge
        )
        return scipy.linalg.solve(gram + ridge * np.eye(gram.shape[0]), basis.T @ rhs, assume_a="pos")
    solution, *_ = scipy.linalg.lstsq(basis, rhs)
    return solution


def estimate_mode_shapes(frf: FrfSet, poles: Sequence[tuple[float, float]]) -> ModalModel:
    """Residues per output for the given (f_hz, zeta) poles.

    Lines are weighted by the FRF set's weights, so outputs with weights
    are solved one at a time.
    """
    if not poles:
        raise ValidationError("need at least one pole to fit residues")
    templates = [Mode(f_hz=f_hz, zeta=zeta) for f_hz, zeta in poles]
    lam = np.array([mode.pole for mode in templates])
    basis = _real_basis(frf.grid.omega, lam)
    m = len(templates)

    rhs = np.vstack([frf.h.real.T, frf.h.imag.T])  # 2 n_f × n_o
    if frf.weights is None:
        theta = _least_squares(basis, rhs)
    else:
        columns = []
        for o in range(frf.n_outputs):
            w = np.concatenate([frf.weights[o], frf.weights[o]])
            columns.append(_least_squares(w[:, np.newaxis] * basis, w * rhs[:, o]))
        theta = np.column_stack(columns)
    residues = theta[:m] + 1j * theta[m:]  # m × n_o

    modes = tuple(
        Mode(f_hz=template.f_hz, zeta=template.zeta, residues=residues[r])
        for r, template in enumerate(templates)
    )
    return ModalModel(modes)


def resynthesize(model: ModalModel, grid: FrequencyGrid, n_outputs: int | None = None) -> FrfSet:
    return synthesize_frf(model, grid, n_outputs)


def curve_fit_mse(measured: FrfSet, fitted: FrfSet) -> float:
    """Mean of |H_measured - H_fitted|² over outputs and lines."""
    if not measured.grid.same_as(fitted.grid):
        raise GridMismatchError("fitted FRF is on a different frequency grid")
    if measured.h.shape != fitted.h.shape:
        raise GridMismatchError(
            "output counts differ", measured=measured.n_outputs, fitted=fitted.n_outputs
        )
    return float(np.mean(np.abs(measured.h - fitted.h) ** 2))


@dataclass(frozen=True, eq=False)
class MacMatrix:
    values: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]


def _as_columns(shapes: np.ndarray) -> np.ndarray:
    shapes = np.asarray(shapes, dtype=complex)
    return shapes[:, np.newaxis] if shapes.ndim == 1 else shapes


def mac(shapes_a: np.ndarray, shapes_b: np.ndarray) -> MacMatrix:
    """Pairwise MAC of mode shapes stored as columns (outputs × modes)."""
    a = _as_columns(shapes_a)
    b = _as_columns(shapes_b)
    if a.shape[0] != b.shape[0]:
        raise ValidationError("mode shapes have different output counts", a=a.shape[0], b=b.shape[0])
    norms_a = np.einsum("ij,ij->j", a.conj(), a).real
    norms_b = np.einsum("ij,ij->j", b.conj(), b).real
    if np.any(norms_a == 0) or np.any(norms_b == 0):
        raise ValidationError("MAC of a zero mode shape is undefined")
    values = np.abs(a.conj().T @ b) ** 2 / np.outer(norms_a, norms_b)
    return MacMatrix(values=np.clip(values, 0.0, 1.0))


@dataclass(frozen=True)
class ModePairing:
    """One row of a two-model comparison; a side is None when unmatched."""

    index_a: int | None
    index_b: int | None
    f_a_hz: float | None
    f_b_hz: float | None
    zeta_a: float | None
    zeta_b: float | None
    mac: float | None

    @property
    def matched(self) -> bool:
        return self.index_a is not None and self.index_b is not None

    @property
    def f_error_pct(self) -> float | None:
        if not self.matched:
            return None
        return 100.0 * (self.f_b_hz - self.f_a_hz) / self.f_a_hz  # type: ignore[operator]

    @property
    def zeta_error_pct(self) -> float | None:
        if not self.matched or not self.zeta_a:
            return None
        return 100.0 * (self.zeta_b - self.zeta_a) / self.zeta_a  # type: ignore[operator]


def compare_modes(
    model_a: ModalModel, model_b: ModalModel, max_rel_gap: float = MATCH_REL_GAP
) -> tuple[list[ModePairing], MacMatrix | None]:
    """Pair modes by nearest frequency, one-to-one, closest pairs first.

    Returns the rows (every mode of ``a`` in order, then unmatched modes of
    ``b``) and the full MAC matrix, or None when the shapes are not
    comparable (missing residues or different output counts).
    """
    modes_a, modes_b = model_a.modes, model_b.modes
    mac_matrix = None
    if modes_a and modes_b and model_a.n_outputs and model_a.n_outputs == model_b.n_outputs:
        mac_matrix = mac(model_a.residue_matrix(), model_b.residue_matrix())

    candidates = sorted(
        (abs(mb.f_hz - ma.f_hz) / ma.f_hz, i, j)
        for i, ma in enumerate(modes_a)
        for j, mb in enumerate(modes_b)
    )
    partner: dict[int, int] = {}
    taken: set[int] = set()
    for gap, i, j in candidates:
        if gap > max_rel_gap:
            break
        if i in partner or j in taken:
            continue
        partner[i] = j
        taken.add(j)

    rows: list[ModePairing] = []
    for i, ma in enumerate(modes_a):
        j = partner.get(i)
        mb = modes_b[j] if j is not None else None
        rows.append(
            ModePairing(
                index_a=i,
                index_b=j,
                f_a_hz=ma.f_hz,
                f_b_hz=mb.f_hz if mb else None,
                zeta_a=ma.zeta,
                zeta_b=mb.zeta if mb else None,
                mac=float(mac_matrix.values[i, j]) if mac_matrix is not None and j is not None else None,
            )
        )
    for j, mb in enumerate(modes_b):
        if j not in taken:
            rows.append(ModePairing(None, j, None, mb.f_hz, None, mb.zeta, None))
    return rows, mac_matrix


def damping_sensitivity(a: CharPolynomial, delta_a: np.ndarray, z_r: complex, ts: float) -> float:
    """First-order change of the damping ratio of root ``z_r`` under ``delta_a``.

    dz = -(sum_i z^i da_i) / A'(z), then with log z = rho + j theta and
    zeta = rho / sqrt(rho² + theta²):

        dzeta = theta² drho / r³ - rho theta dtheta / r³,   r² = rho² + theta²,

    where drho + j dtheta = dz / z. Raises NearMultipleRootError when z_r is
    (close to) a repeated root, where the expansion breaks down.
    """
    if not ts > 0:
        raise ValidationError("sampling period must be > 0", ts=ts)
    delta_a = np.asarray(delta_a, dtype=complex).reshape(-1)
    if len(delta_a) != len(a.coeffs):
        raise ValidationError(
            "coefficient perturbation must match the polynomial", given=len(delta_a), order=a.order
        )
    z_r = complex(z_r)
    roots = poly_roots(a.coeffs)
    scale = max(1.0, abs(z_r))
    distances = np.abs(roots - z_r)
    nearest = int(np.argmin(distances))
    if distances[nearest] > NEAR_ROOT_RTOL * scale:
        raise ValidationError("z_r is not a root of the polynomial", distance=float(distances[nearest]))
    others = np.delete(distances, nearest)
    slope = complex(npoly.polyval(z_r, npoly.polyder(a.coeffs)))
    if abs(slope) <= SIMPLE_ROOT_TOL or (others.size and others.min() <= NEAR_ROOT_RTOL * scale):
        raise NearMultipleRootError(
            "root is (nearly) repeated; closely spaced modes make the damping estimate ill-posed",
            z_re=z_r.real,
            z_im=z_r.imag,
            slope=abs(slope),
        )
    if z_r == 0:
        raise ValidationError("z = 0 has no damping ratio")

    dz = -complex(npoly.polyval(z_r, delta_a)) / slope
    log_z = np.log(z_r)
    rho, theta = log_z.real, log_z.imag
    r2 = rho * rho + theta * theta
    if r2 == 0:
        raise ValidationError("z = 1 has no damping ratio")
    ratio = dz / z_r
    r3 = r2**1.5
    return float((theta * theta * ratio.real - rho * theta * ratio.imag) / r3)
