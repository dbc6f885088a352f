"""Order sweeps: the conventional dense solve and the OMP-sparsified one.

Both sweeps share everything but the per-order coefficient solve: assemble
the normal cache once at n_p, solve each order against it, root, convert,
collapse degenerate roots, keep the stable in-band poles for the diagram.
Orders are independent and go through ``map_ordered``; an order whose solve
or root finding fails is logged and listed in ``skipped``.
"""

from __future__ import annotations

import logging
from collections.abc import Callable

from modalsparse.config import DEFAULT_DEDUP_TOL, DEFAULT_LAMBDA_RATIO, DEFAULT_THRESHOLD_REL
from modalsparse.contracts import ConvergenceError, SingularSystemError, ValidationError
from modalsparse.core.workers import map_ordered
from modalsparse.frf.data import FrfSet
from modalsparse.lscf.kernel import (
    CharPolynomial,
    NormalCache,
    assemble_normal_cache,
    solve_order_dense,
    solve_residual,
)
from modalsparse.lscf.roots import dedup_degenerate, polynomial_poles
from modalsparse.lscf.sparse import SparsityEstimate, estimate_sparsity, omp_solve
from modalsparse.stabilization.diagram import (
    DiagramEntry,
    Method,
    OrderRow,
    StabilityDiagram,
    mark_consistency,
)

log = logging.getLogger(__name__)

OrderSolver = Callable[[int], CharPolynomial]


def _solve_row(cache: NormalCache, solve: OrderSolver, order: int, dedup_tol: float) -> OrderRow:
    a = solve(order)
    poles, zero_roots = polynomial_poles(a.coeffs, cache.grid.ts_seconds)
    kept, removed = dedup_degenerate(poles, dedup_tol)
    if cache.real_coefficients and a.is_real:
        # Roots pair up as z, conj(z); count each pair once, on the data side.
        kept = [pole for pole in kept if pole.z.imag <= 0]
    f_min, f_max = cache.grid.band
    plotted = sorted(
        (pole for pole in kept if pole.stable and pole.in_band(f_min, f_max)),
        key=lambda pole: pole.f_hz,
    )
    return OrderRow(
        order=order,
        entries=tuple(DiagramEntry(pole) for pole in plotted),
        all_poles=tuple(kept),
        zero_roots=zero_roots,
        removed_degenerate=removed,
        support_size=a.nnz,
        residual=solve_residual(cache, a),
    )


def _sweep(
    cache: NormalCache,
    method: Method,
    solve: OrderSolver,
    threshold_rel: float,
    dedup_tol: float,
    workers: int | None,
    sparsity: SparsityEstimate | None = None,
) -> StabilityDiagram:
    def one(order: int) -> OrderRow | Exception:
        try:
            return _solve_row(cache, solve, order, dedup_tol)
        except (SingularSystemError, ConvergenceError) as exc:
            return exc

    rows: list[OrderRow] = []
    skipped: list[int] = []
    for order, result in zip(range(1, cache.n_p + 1), map_ordered(one, range(1, cache.n_p + 1), workers)):
        if isinstance(result, OrderRow):
            rows.append(result)
        else:
            log.warning("%s: skipping order %d: %s", method.value, order, result)
            skipped.append(order)

    diagram = StabilityDiagram(
        method=method,
        n_p=cache.n_p,
        threshold_rel=threshold_rel,
        band=cache.grid.band,
        rows=tuple(rows),
        skipped=tuple(skipped),
        sparsity=sparsity,
    )
    diagram = mark_consistency(diagram)
    log.info(
        "%s sweep: %d orders solved, %d skipped, %d plotted poles",
        method.value,
        len(rows),
        len(skipped),
        sum(len(row.entries) for row in rows),
    )
    return diagram


def _cache_for(frf: FrfSet, n_p: int, cache: NormalCache | None, workers: int | None) -> NormalCache:
    if cache is None:
        return assemble_normal_cache(frf, n_p, workers)
    if cache.n_p != n_p or not cache.grid.same_as(frf.grid):
        raise ValidationError("supplied normal cache does not match this FRF set and order", n_p=n_p)
    return cache


def run_conventional(
    frf: FrfSet,
    n_p: int,
    threshold_rel: float = DEFAULT_THRESHOLD_REL,
    *,
    dedup_tol: float = DEFAULT_DEDUP_TOL,
    cache: NormalCache | None = None,
    workers: int | None = None,
) -> StabilityDiagram:
    """Dense LSCF at every order 1..n_p."""
    cache = _cache_for(frf, n_p, cache, workers)
    return _sweep(
        cache,
        Method.conventional,
        lambda order: solve_order_dense(cache, order),
        threshold_rel,
        dedup_tol,
        workers,
    )


def omp_order_solver(cache: NormalCache, k: int) -> OrderSolver:
    """Order i runs OMP on (D_i, d_i) with min(k, i) atoms."""

    def solve(order: int) -> CharPolynomial:
        d_mat, d_vec = cache.order_system(order)
        solution = omp_solve(d_mat, d_vec, min(k, order))
        return CharPolynomial.from_solution(solution.dense(order), support=set(solution.support))

    return solve


def run_omp(
    frf: FrfSet,
    n_p: int,
    lambda_ratio: float = DEFAULT_LAMBDA_RATIO,
    threshold_rel: float = DEFAULT_THRESHOLD_REL,
    *,
    dedup_tol: float = DEFAULT_DEDUP_TOL,
    cache: NormalCache | None = None,
    workers: int | None = None,
) -> StabilityDiagram:
    """LSCF with OMP-sparsified denominators.

    k comes once from LASSO on the full-order (D, d) and is reused at every
    order, clamped to the order.
    """
    cache = _cache_for(frf, n_p, cache, workers)
    sparsity = estimate_sparsity(cache.d_mat, cache.d_vec, lambda_ratio)
    return _sweep(
        cache,
        Method.omp,
        omp_order_solver(cache, sparsity.k),
        threshold_rel,
        dedup_tol,
        workers,
        sparsity=sparsity,
    )
