"""Drazin index, Drazin inverse, spectral idempotent, core-nilpotent decomposition.

Every square complex matrix splits as an invertible core on range(A^p) plus a
nilpotent block on ker(A^p), where p is the Drazin index; the Drazin inverse
inverts the core and kills the nilpotent part.  Both kernels share this one
code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedBasisError, ShapeMismatchError
from .matrices import (
    EXACT,
    FLOAT,
    Matrix,
    Tolerance,
    columnspace_basis,
    direct_sum,
    fro_norm,
    hstack,
    identity,
    inverse,
    nullspace_basis,
    rank,
    solve,
    zeros,
)
from .report import Report

# Float-kernel change of basis with condition estimate beyond this is refused.
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class DrazinData:
    """Drazin index p, Drazin inverse, and spectral idempotent E = I - A·A_d."""

    index: int
    dinv: Matrix
    idempotent: Matrix

    def to_json(self) -> dict:
        from .matrices import matrix_to_json

        return {
            "index": self.index,
            "dinv": matrix_to_json(self.dinv),
            "idempotent": matrix_to_json(self.idempotent),
        }


@dataclass(frozen=True)
class Decomposition:
    """Change of basis W with W^-1·A·W = core ⊕ nil.

    Columns of W are a basis of range(A^p) followed by a basis of ker(A^p);
    the core block is invertible and the nil block is nilpotent of order at
    most p (p = index).
    """

    W: Matrix
    core: Matrix
    nil: Matrix
    core_dim: int
    index: int

    def block_form(self) -> Matrix:
        return direct_sum(self.core, self.nil)

    def to_json(self) -> dict:
        from .matrices import matrix_to_json

        return {
            "W": matrix_to_json(self.W),
            "core": matrix_to_json(self.core),
            "nil": matrix_to_json(self.nil),
            "core_dim": self.core_dim,
            "index": self.index,
        }


def _anchored_rank_tol(a: Matrix, k: int, tol: Tolerance | None) -> Tolerance | None:
    """Rank tolerance for A^k anchored at sigma_max(A)^k.

    A power that collapses to numerical zero has only rounding noise left;
    judged purely relative to its own largest singular value that noise would
    read as full rank.  Anchoring the absolute cutoff at the k-th power of
    the norm of A keeps rank sequences monotone.
    """
    if a.kernel == EXACT:
        return tol
    base_tol = tol or RANK_TOL
    from .matrices import operator_norm_estimate

    sigma = operator_norm_estimate(a)
    anchor = base_tol.rel * sigma ** k if sigma > 0 else 0.0
    return Tolerance(abs=max(base_tol.abs, anchor), rel=base_tol.rel)


def drazin_index(a: Matrix, tol: Tolerance | None = None) -> int:
    """Smallest k >= 0 with rank(A^k) = rank(A^(k+1)); 0 means invertible."""
    if not a.is_square:
        raise ShapeMismatchError("Drazin index needs a square matrix")
    n = a.rows
    prev = n  # rank(A^0)
    power = identity(n, a.kernel)
    k = 0
    while True:
        power = power @ a
        r = rank(power, _anchored_rank_tol(a, k + 1, tol))
        if r == prev:
            return k
        if k > n:
            raise IllConditionedBasisError(
                "numerical rank sequence did not stabilize; retry exactly"
            )
        prev = r
        k += 1


def core_nilpotent(a: Matrix, tol: Tolerance | None = None) -> Decomposition:
    """Split A into its invertible core on range(A^p) and nilpotent remainder."""
    if not a.is_square:
        raise ShapeMismatchError("decomposition needs a square matrix")
    n = a.rows
    p = drazin_index(a, tol)
    if p == 0:
        return Decomposition(
            W=identity(n, a.kernel),
            core=a,
            nil=zeros(0, 0, a.kernel),
            core_dim=n,
            index=0,
        )
    ap = a ** p
    power_tol = _anchored_rank_tol(a, p, tol)
    q = columnspace_basis(ap, power_tol)
    k = nullspace_basis(ap, power_tol)
    w = hstack(q, k)
    if a.kernel == FLOAT:
        cond = np.linalg.cond(w.to_complex_array()) if n else 1.0
        if not np.isfinite(cond) or cond > _COND_LIMIT:
            raise IllConditionedBasisError(
                f"basis condition {cond:.3e} exceeds {_COND_LIMIT:.0e}; retry exactly"
            )
    block = solve(w, a @ w, tol)
    r = q.cols
    return Decomposition(
        W=w,
        core=block.submatrix(0, r, 0, r),
        nil=block.submatrix(r, n, r, n),
        core_dim=r,
        index=p,
    )


def drazin_inverse(a: Matrix, tol: Tolerance | None = None) -> DrazinData:
    """Drazin inverse through the core-nilpotent route; A_d = A^-1 when invertible."""
    dec = core_nilpotent(a, tol)
    n = a.rows
    if dec.index == 0:
        dinv = inverse(a, tol)
    else:
        inner = direct_sum(
            inverse(dec.core, tol),
            zeros(n - dec.core_dim, n - dec.core_dim, a.kernel),
        )
        dinv = dec.W @ inner @ inverse(dec.W, tol)
    idem = identity(n, a.kernel) - a @ dinv
    return DrazinData(index=dec.index, dinv=dinv, idempotent=idem)


def verify_drazin_axioms(a: Matrix, d: DrazinData,
                         tol: Tolerance | None = None) -> Report:
    """Residuals of the three defining identities plus idempotency of E."""
    if a.shape != d.dinv.shape:
        raise ShapeMismatchError("Drazin data does not match the matrix")
    tol = tol or Tolerance()
    rep = Report(a.kernel)
    ad = d.dinv
    rep.check_zero("commutes", a @ ad - ad @ a, tol,
                   scale=fro_norm(a) * fro_norm(ad))
    rep.check_zero("inner", ad @ ad @ a - ad, tol,
                   scale=max(fro_norm(ad) ** 2 * fro_norm(a), fro_norm(ad)))
    ap = a ** d.index
    rep.check_zero("eventual", ap @ a @ ad - ap, tol,
                   scale=max(fro_norm(ap @ a) * fro_norm(ad), fro_norm(ap)))
    e = d.idempotent
    # E = I - A·A_d carries rounding at the scale of that product, not of E.
    rep.check_zero("idempotent", e @ e - e, tol,
                   scale=max(1.0, fro_norm(a) * fro_norm(ad)))
    return rep
