"""The random-polynomial study linking coefficient sparsity to root placement."""

from .sparsity_study import (
    SparsityStudyResult,
    TrialRoots,
    random_sparse_poly_trial,
    run_sparsity_study,
    sparse_poly_coeffs,
    sparsity_root_cloud,
)

__all__ = [
    "SparsityStudyResult",
    "TrialRoots",
    "random_sparse_poly_trial",
    "run_sparsity_study",
    "sparse_poly_coeffs",
    "sparsity_root_cloud",
]
