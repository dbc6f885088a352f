"""LSCF normal equations: assembly once per FRF set, then one solve per order.

The common-denominator model fits every output o with

    H_o(w) ≈ B_o(Omega) / A(Omega),   Omega = exp(-j w T_s),

by minimising the linearised error  w_o (B_o - H_o A)  over all lines. With
the power basis P[f, r] = Omega_f^r the normal matrix of output o splits into

    R_o = P^H W^2 P,   S_o = -P^H W^2 H P,   T_o = P^H W^2 |H|^2 P,

and eliminating the numerators leaves C = sum_o (T_o - S_o^H R_o^-1 S_o),
Hermitian and positive semi-definite. C is formed here as the Gram matrix of
the part of W H P orthogonal to range(W P): the same matrix, without forming
R_o^-1. R_o itself is never factored; on a wide band its condition number
passes 1/eps long before n_p = 30, while the projection stays accurate.

Coefficients are real by default. The data only covers positive
frequencies, and a real A(Omega) puts each physical root next to its
conjugate, so every mode constrains the fit twice. Real coefficients
minimise the same error over real vectors, which is the Gram matrix of the
stacked [Re; Im] rows. ``real_coefficients=False`` keeps the complex fit.

Fixing the top coefficient a_{n_p} = 1 turns C a = 0 into D x = d. Lower
orders reuse the full-order system: order i solves the lower-right i × i
block of D, so every row of a stability diagram costs one small dense solve.

Coefficient vectors everywhere in the package are ascending: index 0 is the
constant term, index ``order`` the monic top.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from modalsparse.contracts import NumericalError, SingularSystemError, ValidationError
from modalsparse.core.workers import map_ordered
from modalsparse.frf.data import FrequencyGrid, FrfSet

log = logging.getLogger(__name__)

# ‖C - C^H‖_max allowed relative to ‖C‖_max.
HERMITIAN_TOL = 1e-8
# |Im Omega| under which a line counts as real (f = 0 or f = f_max).
REAL_LINE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OutputBlocks:
    """One output's weighted design blocks W P and W H P; kept for numerators.

    In the real-coefficient fit both are stacked as [Re; Im].
    """

    wp: np.ndarray
    whp: np.ndarray


@dataclass(frozen=True, eq=False)
class NormalCache:
    n_p: int
    grid: FrequencyGrid
    powers: np.ndarray
    big_c: np.ndarray
    d_mat: np.ndarray
    d_vec: np.ndarray
    per_output: tuple[OutputBlocks, ...]
    real_coefficients: bool = True

    def order_system(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(D_i, d_i): the lower-right i × i block and its right-hand side."""
        if not 1 <= i <= self.n_p:
            raise ValidationError("order must lie in [1, n_p]", order=i, n_p=self.n_p)
        lo = self.n_p - i
        return self.d_mat[lo:, lo:], self.d_vec[lo:]


@dataclass(frozen=True, eq=False)
class CharPolynomial:
    """A monic characteristic polynomial of degree ``order``.

    ``coeffs`` is ascending with ``coeffs[order] == 1``; ``support`` holds the
    indices of nonzero coefficients and always includes the top.
    """

    order: int
    coeffs: np.ndarray
    support: frozenset[int]

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        if len(coeffs) != self.order + 1 or self.order < 1:
            raise ValidationError(
                "polynomial needs order + 1 coefficients", order=self.order, given=len(coeffs)
            )
        if coeffs[-1] != 1:
            raise ValidationError("top coefficient must be exactly 1", order=self.order)
        if self.order not in self.support:
            raise ValidationError("support must contain the top index", order=self.order)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "support", frozenset(self.support))

    @classmethod
    def from_solution(cls, x: np.ndarray, support: set[int] | None = None) -> "CharPolynomial":
        """[x..., 1]; support defaults to the nonzero entries of x plus the top."""
        x = np.asarray(x, dtype=complex).reshape(-1)
        order = len(x)
        coeffs = np.append(x, 1.0 + 0j)
        if support is None:
            support = {int(index) for index in np.flatnonzero(x)}
        return cls(order=order, coeffs=coeffs, support=frozenset(support) | {order})

    @property
    def nnz(self) -> int:
        """Nonzero coefficients actually used, top included."""
        return len(self.support)

    @property
    def is_real(self) -> bool:
        return not np.any(self.coeffs.imag)

    def evaluate(self, z: np.ndarray | complex) -> np.ndarray:
        return np.polynomial.polynomial.polyval(z, self.coeffs)


def basis_powers(grid: FrequencyGrid, n_p: int) -> np.ndarray:
    """P[f, r] = Omega_f^r for r = 0..n_p, by running products.

    |Omega| = 1, so the recurrence neither grows nor decays.
    """
    omega_z = np.exp(-1j * grid.omega * grid.ts_seconds)
    steps = np.repeat(omega_z[:, np.newaxis], n_p + 1, axis=1)
    steps[:, 0] = 1.0
    return np.cumprod(steps, axis=1)


def _stack_real(block: np.ndarray) -> np.ndarray:
    return np.vstack([block.real, block.imag])


def _independent_rows(powers: np.ndarray, w: np.ndarray, real: bool) -> int:
    """Rank W P can reach: one row per weighted line, two per complex line when real."""
    used = w != 0
    if not real:
        return int(used.sum())
    on_axis = np.abs(powers[used, 1].imag) <= REAL_LINE_TOL
    return int(2 * used.sum() - on_axis.sum())


def _output_blocks(
    powers: np.ndarray, h: np.ndarray, w: np.ndarray, output: int, real: bool
) -> tuple[OutputBlocks, np.ndarray]:
    """(blocks, C_o) for one output."""
    n_cols = powers.shape[1]
    rows = _independent_rows(powers, w, real)
    if rows < n_cols:
        raise SingularSystemError(
            "too few weighted lines to fit the numerator; check weights and frequency lines",
            output=output,
            rows=rows,
            n_p=n_cols - 1,
        )
    wp = w[:, np.newaxis] * powers
    whp = (w * h)[:, np.newaxis] * powers
    if real:
        wp, whp = _stack_real(wp), _stack_real(whp)
    q, _ = np.linalg.qr(wp, mode="reduced")
    residual = whp - q @ (q.conj().T @ whp)
    c_o = residual.conj().T @ residual
    return OutputBlocks(wp=wp, whp=whp), c_o


def assemble_normal_cache(
    frf: FrfSet,
    n_p: int,
    workers: int | None = None,
    *,
    real_coefficients: bool = True,
) -> NormalCache:
    """Build the per-output blocks and the reduced matrix C at order ``n_p``.

    Outputs are independent and may run on the worker pool; their C_o are
    summed in output order, so the result does not depend on ``workers``.
    """
    if n_p < 2:
        raise ValidationError("maximum order must be >= 2", n_p=n_p)
    if frf.n_lines <= n_p:
        raise ValidationError(
            "need more frequency lines than the maximum order", n_f=frf.n_lines, n_p=n_p
        )
    powers = basis_powers(frf.grid, n_p)
    weights = frf.weight_matrix()

    def one(o: int) -> tuple[OutputBlocks, np.ndarray]:
        return _output_blocks(powers, frf.h[o], weights[o], o, real_coefficients)

    results = map_ordered(one, range(frf.n_outputs), workers)
    big_c = np.zeros((n_p + 1, n_p + 1), dtype=float if real_coefficients else complex)
    for _, c_o in results:
        big_c += c_o

    scale = float(np.abs(big_c).max())
    if not np.isfinite(scale):
        raise NumericalError("reduced matrix has non-finite entries", n_p=n_p)
    asymmetry = float(np.abs(big_c - big_c.conj().T).max())
    if asymmetry > HERMITIAN_TOL * scale:
        raise NumericalError(
            "reduced matrix is not Hermitian", asymmetry=asymmetry, scale=scale
        )
    big_c = 0.5 * (big_c + big_c.conj().T)
    big_c.setflags(write=False)

    d_mat = big_c[:n_p, :n_p]
    d_vec = -big_c[:n_p, n_p]
    log.debug(
        "assembled n_p=%d over %d outputs (%s coefficients), ‖C‖_max=%.3g",
        n_p,
        frf.n_outputs,
        "real" if real_coefficients else "complex",
        scale,
    )
    return NormalCache(
        n_p=n_p,
        grid=frf.grid,
        powers=powers,
        big_c=big_c,
        d_mat=d_mat,
        d_vec=d_vec,
        per_output=tuple(blocks for blocks, _ in results),
        real_coefficients=real_coefficients,
    )


def solve_order_dense(cache: NormalCache, i: int) -> CharPolynomial:
    """Minimum-norm least-squares solve of D_i x_i = d_i; full support.

    High orders are over-modelled and D_i is close to singular there; the
    solve goes ahead and only a D_i without any usable rank is refused.
    """
    d_mat, d_vec = cache.order_system(i)
    x, _, rank, _ = scipy.linalg.lstsq(d_mat, d_vec, lapack_driver="gelsd")
    if rank == 0 or not np.all(np.isfinite(x)):
        raise SingularSystemError("D_i has no usable rank", order=i, rank=int(rank))
    if rank < i:
        log.debug("order %d: D_i has rank %d; taking the minimum-norm solution", i, rank)
    return CharPolynomial.from_solution(x, support=set(range(i)))


def solve_residual(cache: NormalCache, a: CharPolynomial) -> float:
    """‖D_i x_i - d_i‖ for the order-i solution held in ``a``."""
    d_mat, d_vec = cache.order_system(a.order)
    return float(np.linalg.norm(d_mat @ a.coeffs[:-1] - d_vec))


def embed(cache: NormalCache, a: CharPolynomial) -> np.ndarray:
    """``a`` as a length n_p + 1 vector in the slot its lower-right block uses."""
    if a.order > cache.n_p:
        raise ValidationError("polynomial order exceeds the cache order", order=a.order, n_p=cache.n_p)
    full = np.zeros(cache.n_p + 1, dtype=complex)
    full[cache.n_p - a.order :] = a.coeffs
    return full


def numerator_from_denominator(cache: NormalCache, a: CharPolynomial, o: int) -> np.ndarray:
    """b_o = argmin ‖W P b - W H P a‖, by least squares on the design blocks.

    A lower-order ``a`` is embedded the way its block was sliced, so b_o
    always has n_p + 1 coefficients.
    """
    if not 0 <= o < len(cache.per_output):
        raise ValidationError("output index out of range", output=o, n_outputs=len(cache.per_output))
    blocks = cache.per_output[o]
    a_full = embed(cache, a)
    if cache.real_coefficients:
        if not a.is_real:
            raise ValidationError("a real-coefficient cache needs a real denominator", order=a.order)
        a_full = a_full.real
    b, *_ = scipy.linalg.lstsq(blocks.wp, blocks.whp @ a_full)
    return np.asarray(b, dtype=complex)


def rational_frf(cache: NormalCache, a: CharPolynomial) -> np.ndarray:
    """B_o / A on the cache's grid, n_o × n_f."""
    a_full = embed(cache, a)
    denominator = cache.powers @ a_full
    rows = []
    for o in range(len(cache.per_output)):
        rows.append(cache.powers @ numerator_from_denominator(cache, a, o) / denominator)
    return np.vstack(rows)
