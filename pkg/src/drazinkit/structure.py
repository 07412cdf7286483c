"""Structural consequences of D-normality: core restriction, similarity to a
normal matrix, and the unitary-core form of partially isometric contractions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import (
    ClassQuery,
    is_contraction,
    is_dn,
    is_m_partial_isometry,
    is_normal,
)
from .drazin import core_nilpotent, drazin_inverse
from .errors import (
    EigenFailureError,
    ExactKernelUnsupportedError,
    NotInClassError,
)
from .matrices import (
    EXACT,
    FLOAT,
    Matrix,
    commutator,
    direct_sum,
    fro_norm,
    identity,
    inverse,
    solve,
    zeros,
)
from .report import Report

_EIG_COND_LIMIT = 1e12


@dataclass(frozen=True)
class SimilarityCertificate:
    """Witness that the Drazin inverse is similar to a normal matrix.

    Holds S invertible and N normal with A_d = S^-1 · N · S; `residual` is the
    Frobenius norm of S·A_d·S^-1 - N actually achieved.
    """

    S: Matrix
    N: Matrix
    target: str
    residual: float

    def to_json(self) -> dict:
        from .matrices import matrix_to_json

        return {
            "S": matrix_to_json(self.S),
            "N": matrix_to_json(self.N),
            "target": self.target,
            "residual": self.residual,
        }


def _core_basis(dec) -> Matrix:
    return dec.W.submatrix(0, dec.W.rows, 0, dec.core_dim)


def _restriction_dn_report(core: Matrix, gram: Matrix, q: ClassQuery) -> Report:
    """DN test for a core block written in a possibly non-orthonormal basis.

    The restriction's adjoint in basis coordinates is G^-1·C*·G where G is the
    Gram matrix of the basis columns; with orthonormal columns this reduces to
    the plain conjugate transpose.
    """
    rep = Report(core.kernel)
    if core.rows == 0:
        rep.check_flag("dn", True)
        return rep
    dd = drazin_inverse(core)
    adj = solve(gram, core.adjoint() @ gram)
    diff = commutator(dd.dinv ** q.n, adj ** q.m)
    rep.check_zero("dn", diff, q.tol,
                   scale=fro_norm(dd.dinv) ** q.n * fro_norm(adj) ** q.m)
    return rep


def core_restriction_equivalence(a: Matrix, q: ClassQuery) -> Report:
    """Check that A and its core restriction land on the same DN verdict."""
    whole = is_dn(a, q)
    dec = core_nilpotent(a)
    basis = _core_basis(dec)
    gram = basis.adjoint() @ basis
    core_rep = _restriction_dn_report(dec.core, gram, q)
    rep = Report(a.kernel)
    rep.check_flag("dn_whole", whole.ok())
    rep.residuals["dn_whole"] = whole.residuals["dn"]
    rep.check_flag("dn_core", core_rep.ok())
    rep.residuals["dn_core"] = core_rep.residuals["dn"]
    rep.check_flag("agrees", whole.ok() == core_rep.ok())
    return rep


def similarity_to_normal(a: Matrix, q: ClassQuery) -> SimilarityCertificate:
    """Build S, N with A_d = S^-1·N·S and N normal.

    Float kernel: diagonalize the core (LAPACK QR iteration on the Hessenberg
    form via numpy.linalg.eig), eigenvalues sorted by (magnitude, phase) for
    reproducibility.  Exact kernel: available only when the core block is
    already a normal matrix, in which case the block decomposition itself is
    the certificate.
    """
    if not is_dn(a, q).ok():
        raise NotInClassError(f"operator is not ({q.n},{q.m})-power D-normal")
    dec = core_nilpotent(a)
    n = a.rows
    r = dec.core_dim

    if a.kernel == EXACT:
        if r and not is_normal(dec.core).ok():
            raise ExactKernelUnsupportedError(
                "exact certificates need an already-normal core; retry in float"
            )
        s = inverse(dec.W)
        if r:
            nmat = direct_sum(inverse(dec.core), zeros(n - r, n - r, EXACT))
        else:
            nmat = zeros(n, n, EXACT)
        ad = drazin_inverse(a).dinv
        diff = s @ ad @ inverse(s) - nmat
        residual = 0.0 if diff.is_zero() else fro_norm(diff)
        return SimilarityCertificate(S=s, N=nmat, target="drazin_inverse",
                                     residual=residual)

    if r == 0:
        # Nilpotent input: A_d = 0 is itself normal.
        s = identity(n, FLOAT)
        nmat = zeros(n, n, FLOAT)
        return SimilarityCertificate(S=s, N=nmat, target="drazin_inverse",
                                     residual=0.0)

    core = dec.core.to_complex_array()
    try:
        evals, vecs = np.linalg.eig(core)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigensolver failed: {exc}") from exc
    order = np.lexsort((np.angle(evals), np.abs(evals)))
    evals = evals[order]
    vecs = vecs[:, order]
    cond = np.linalg.cond(vecs)
    if not np.isfinite(cond) or cond > _EIG_COND_LIMIT:
        raise EigenFailureError(
            f"eigenvector condition {cond:.3e} exceeds {_EIG_COND_LIMIT:.0e}"
        )
    v = Matrix.from_complex(vecs)
    s = direct_sum(inverse(v), identity(n - r, FLOAT)) @ inverse(dec.W)
    nmat = direct_sum(
        Matrix.from_complex(np.diag(1.0 / evals)),
        zeros(n - r, n - r, FLOAT),
    )
    ad = dec.W @ direct_sum(inverse(dec.core), zeros(n - r, n - r, FLOAT)) \
        @ inverse(dec.W)
    residual = fro_norm(s @ ad @ inverse(s) - nmat)
    return SimilarityCertificate(S=s, N=nmat, target="drazin_inverse",
                                 residual=residual)


def partial_isometry_structure(a: Matrix, q: ClassQuery) -> Report:
    """Verify the unitary-core form of an m-partially-isometric DN contraction.

    Preconditions: a is (n,m)-power D-normal, an m-partial isometry, and a
    contraction.  The report certifies (i) the core block acts unitarily on
    its subspace and (ii) membership in the (1,1) class.
    """
    if not is_dn(a, q).ok():
        raise NotInClassError(f"operator is not ({q.n},{q.m})-power D-normal")
    if not is_m_partial_isometry(a, q.m, q.tol).ok():
        raise NotInClassError(f"operator is not an {q.m}-partial isometry")
    if not is_contraction(a, q.tol).ok():
        raise NotInClassError("operator is not a contraction")
    dec = core_nilpotent(a)
    rep = Report(a.kernel)
    basis = _core_basis(dec)
    gram = basis.adjoint() @ basis
    # Restriction to range(A^p) is unitary iff ||A x|| = ||x|| there:
    # basis* (A*A) basis must equal the basis Gram matrix.
    rep.check_zero(
        "core_unitary",
        basis.adjoint() @ a.adjoint() @ a @ basis - gram,
        q.tol,
        scale=max(fro_norm(gram), 1.0),
    )
    rep.check_flag("in_dn_1_1", is_dn(a, ClassQuery(1, 1, q.tol)).ok())
    return rep
