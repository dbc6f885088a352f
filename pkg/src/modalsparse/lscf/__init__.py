"""The LSCF core: normal equations, sparse coefficient solvers, roots."""

from .kernel import (
    CharPolynomial,
    NormalCache,
    OutputBlocks,
    assemble_normal_cache,
    numerator_from_denominator,
    rational_frf,
    solve_order_dense,
    solve_residual,
)
from .roots import Pole, dedup_degenerate, pole_from_root, poly_roots, polynomial_poles
from .sparse import (
    LassoResult,
    SparseSolution,
    SparsityEstimate,
    estimate_sparsity,
    kkt_residual,
    lasso_solve,
    omp_select,
    omp_solve,
)

__all__ = [
    "CharPolynomial",
    "NormalCache",
    "OutputBlocks",
    "assemble_normal_cache",
    "numerator_from_denominator",
    "rational_frf",
    "solve_order_dense",
    "solve_residual",
    "Pole",
    "dedup_degenerate",
    "pole_from_root",
    "poly_roots",
    "polynomial_poles",
    "LassoResult",
    "SparseSolution",
    "SparsityEstimate",
    "estimate_sparsity",
    "kkt_residual",
    "lasso_solve",
    "omp_select",
    "omp_solve",
]
