"""Matrix-free all-at-once solvers for non-local evolutionary PDEs.

The package couples an L1 time discretization of the Caputo derivative
with Toeplitz spatial stencils into one space-time system, solves it with
restarted GMRES, and accelerates convergence with a symmetric positive
definite preconditioner diagonalized by multidimensional DST-I sweeps.
"""

from .allatonce import (
    AllAtOnceOperator,
    ProblemSpec,
    TauPinTPreconditioner,
    apply_A,
    apply_P_inv,
    apply_P_inv_sqrt,
    assemble_rhs,
    build_operator,
    build_preconditioner,
    evaluate_exact,
)
from .gmres import GmresConfig, SolveReport, gmres, solve_one_sided, solve_two_sided
from .spatial import (
    SpatialOperator,
    SpatialSpec,
    assemble_G,
    G_matvec,
    laplacian_coeffs,
    riesz_centered_coeffs,
    spatial_symbol_eval,
    wsgd_coeffs,
)
from .tau import (
    SingularTauError,
    TauOperator,
    dst1,
    tau_apply,
    tau_dense,
    tau_eigenvalues,
    tau_eigs_fast,
    tau_solve,
)
from .temporal import L1Coefficients, build_B, g_alpha_eval, l1_coefficients
from .toeplitz import (
    DenseCapError,
    LowerTriToeplitz,
    Toeplitz1D,
    lower_tri_matvec,
    materialize,
    skew_part,
    symmetric_part,
    toeplitz_matvec,
)

__version__ = "0.1.0"

__all__ = [
    "AllAtOnceOperator",
    "DenseCapError",
    "GmresConfig",
    "L1Coefficients",
    "LowerTriToeplitz",
    "ProblemSpec",
    "SingularTauError",
    "SolveReport",
    "SpatialOperator",
    "SpatialSpec",
    "TauOperator",
    "TauPinTPreconditioner",
    "Toeplitz1D",
    "G_matvec",
    "apply_A",
    "apply_P_inv",
    "apply_P_inv_sqrt",
    "assemble_G",
    "assemble_rhs",
    "build_B",
    "build_operator",
    "build_preconditioner",
    "dst1",
    "evaluate_exact",
    "g_alpha_eval",
    "gmres",
    "l1_coefficients",
    "laplacian_coeffs",
    "lower_tri_matvec",
    "materialize",
    "riesz_centered_coeffs",
    "skew_part",
    "solve_one_sided",
    "solve_two_sided",
    "spatial_symbol_eval",
    "symmetric_part",
    "tau_apply",
    "tau_dense",
    "tau_eigenvalues",
    "tau_eigs_fast",
    "tau_solve",
    "toeplitz_matvec",
    "wsgd_coeffs",
]
