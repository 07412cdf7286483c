"""Verifiable Drazin-inverse toolkit over exact and floating complex kernels."""

from .matrices import (
    EXACT,
    FLOAT,
    DEFAULT_TOL,
    RANK_TOL,
    GaussianRational,
    Matrix,
    Tolerance,
    commutator,
    columnspace_basis,
    diagonal,
    direct_sum,
    fro_norm,
    identity,
    inverse,
    kron,
    matrix_from_json,
    matrix_to_json,
    nullspace_basis,
    operator_norm_estimate,
    rank,
    solve,
    zeros,
)
from .report import Report
from .drazin import (
    Decomposition,
    DrazinData,
    core_nilpotent,
    drazin_index,
    drazin_inverse,
    verify_drazin_axioms,
)
from .classify import (
    ClassQuery,
    is_contraction,
    is_dn,
    is_dqn,
    is_m_partial_isometry,
    is_normal,
)

__version__ = "0.1.0"
