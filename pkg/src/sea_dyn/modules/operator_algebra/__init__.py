"""
Operator algebra module
"""
from sea_dyn.modules.operator_algebra.linalg import (
    EigenSystem,
    anticommutator,
    check_density_matrix,
    check_hermitian,
    commutator,
    eig_hermitian,
    fix_phase,
    hermitize,
    matrix_function,
    max_norm,
    pure_state,
    random_density_matrix,
    random_hermitian,
    real_scalar_product,
    rho_log_rho,
    xlogx_operator,
)

__all__ = [
    "EigenSystem",
    "anticommutator",
    "check_density_matrix",
    "check_hermitian",
    "commutator",
    "eig_hermitian",
    "fix_phase",
    "hermitize",
    "matrix_function",
    "max_norm",
    "pure_state",
    "random_density_matrix",
    "random_hermitian",
    "real_scalar_product",
    "rho_log_rho",
    "xlogx_operator",
]
