"""Superoperator algebra for multi-mode bosonic Lindblad dynamics.

Symbolic generator-family algebra with matrix coefficients, closed-form
Liouvillian diagonalization, sector-wise spectra, truncated-Fock
propagators (exact, relaxation-only, linear-in-thermal-occupation) and
Heisenberg-picture conjugation, cross-checked against a brute-force
Fock-space oracle.
"""

from .algebra import (
    GeneratorKind,
    SuperOpExpr,
    commutator,
    expr_add,
    expr_scale,
    identity_term,
    k_minus,
    k_plus,
    k_zero,
    n_minus,
    similarity_kpm,
    zero_expr,
)
from .liouvillian import (
    AlgebraConsistencyError,
    DiagonalizationResult,
    SystemSpec,
    TransformIntermediate,
    build_liouvillian,
    conjugate,
    diagonalize,
    solve_riccati,
    transform_once,
    transform_twice,
    zero_order,
)
from .spectrum import (
    DiagCoeffs,
    SectorIndex,
    SectorMatrix,
    diag_coeffs,
    full_spectrum,
    oracle_sector_matrix,
    sector_eigenvalues,
    sector_matrix,
)
from .fock import (
    DensityMatrix,
    EvolutionMatrixU,
    FockCutoff,
    TruncationLeakWarning,
    bell_01_10,
    evolution_matrix_u,
    exact_propagate,
    fock_state,
    heisenberg_expect,
    linear_propagate,
    mode_operators,
    represent,
    thermal_state,
    vec,
    unvec,
    zero_order_propagate,
)

__version__ = "0.1.0"

__all__ = [
    "GeneratorKind",
    "SuperOpExpr",
    "commutator",
    "expr_add",
    "expr_scale",
    "identity_term",
    "k_minus",
    "k_plus",
    "k_zero",
    "n_minus",
    "similarity_kpm",
    "zero_expr",
    "AlgebraConsistencyError",
    "DiagonalizationResult",
    "SystemSpec",
    "TransformIntermediate",
    "build_liouvillian",
    "conjugate",
    "diagonalize",
    "solve_riccati",
    "transform_once",
    "transform_twice",
    "zero_order",
    "DiagCoeffs",
    "SectorIndex",
    "SectorMatrix",
    "diag_coeffs",
    "full_spectrum",
    "oracle_sector_matrix",
    "sector_eigenvalues",
    "sector_matrix",
    "DensityMatrix",
    "EvolutionMatrixU",
    "FockCutoff",
    "TruncationLeakWarning",
    "bell_01_10",
    "evolution_matrix_u",
    "exact_propagate",
    "fock_state",
    "heisenberg_expect",
    "linear_propagate",
    "mode_operators",
    "represent",
    "thermal_state",
    "vec",
    "unvec",
    "zero_order_propagate",
    "__version__",
]
