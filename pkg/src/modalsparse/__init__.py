"""modalsparse: LSCF and OMP-sparsified LSCF modal parameter estimation."""
