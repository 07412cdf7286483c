"""Commutant transfer and intertwining checks for D-normal operators.

A (1,1)-power D-normal operator has a normal Drazin inverse, so classical
Fuglede transfer applies to anything commuting with it.  Intertwining pairs
(A·T = T·B) need an extra symmetry hypothesis before the transfer survives;
both hypotheses and the quasiaffinity similarity argument are checked here at
desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .classify import ClassQuery, is_dn
from .drazin import core_nilpotent, drazin_index, drazin_inverse
from .errors import (
    HypothesisViolatedError,
    NotCommutingError,
    NotInClassError,
    NotIntertwiningError,
    NotInvertibleError,
    ShapeMismatchError,
)
from .matrices import (
    FLOAT,
    Matrix,
    Tolerance,
    commutator,
    direct_sum,
    fro_norm,
    identity,
    inverse,
    rank,
    residual_of,
)
from .report import Report

REVERSE = "reverse"
DRAZIN_SKEW = "drazin_skew"

STATEMENT = "statement"  # hypothesis read as A·T = T·B
SUMMARY = "summary"      # hypothesis read as T·A = B·T

# Matched eigenvalues of the two cores may differ by at most this much;
# reflects accumulated eigensolver error at desk scale.
PAIRING_TOL = 1e-7


@dataclass(frozen=True)
class IntertwiningInstance:
    """Square triple (T, A, B) living on one space in one kernel."""

    T: Matrix
    A: Matrix
    B: Matrix

    def __post_init__(self):
        shapes = {self.T.shape, self.A.shape, self.B.shape}
        if len(shapes) != 1 or not self.T.is_square:
            raise ShapeMismatchError("instance needs equal square shapes")
        if len({self.T.kernel, self.A.kernel, self.B.kernel}) != 1:
            raise ShapeMismatchError("instance mixes kernels")


def fuglede_drazin(t: Matrix, x: Matrix, q: ClassQuery) -> Report:
    """Transfer [T, X] = 0 to [T_d*, X] = 0 for (1,1)-power D-normal T."""
    dd = drazin_inverse(t)
    if not is_dn(t, ClassQuery(1, 1, q.tol), dd).ok():
        raise NotInClassError("operator is not (1,1)-power D-normal")
    hyp_res, hyp_ok = residual_of(commutator(t, x), q.tol,
                                  scale=fro_norm(t) * fro_norm(x))
    if not hyp_ok:
        raise NotCommutingError(f"[T, X] residual {hyp_res:.3e}")
    rep = Report(t.kernel)
    rep.check_zero("fuglede_transfer", commutator(dd.dinv.adjoint(), x), q.tol,
                   scale=fro_norm(dd.dinv) * fro_norm(x))
    return rep


def extended_commutativity(
    inst: IntertwiningInstance,
    hypothesis: str | None,
    tol: Tolerance | None = None,
    orientation: str = STATEMENT,
) -> Report:
    """Check the four adjoint-transfer residuals of an intertwining pair.

    Base hypothesis is A·T = T·B; `orientation="summary"` tests the mirrored
    reading T·A = B·T instead (equivalent to swapping the roles of A and B).
    `hypothesis` selects the extra assumption: REVERSE (B·T = T·A),
    DRAZIN_SKEW ((A-B)·T_d = T_d·(B-A)), or None to skip enforcement and just
    report the conclusions, which is how counterexamples are exercised.
    """
    tol = tol or Tolerance()
    t = inst.T
    a, b = inst.A, inst.B
    if orientation == SUMMARY:
        a, b = b, a
    elif orientation != STATEMENT:
        raise ValueError(f"unknown orientation {orientation!r}")
    dd = drazin_inverse(t)
    if not is_dn(t, ClassQuery(1, 1, tol), dd).ok():
        raise NotInClassError("operator is not (1,1)-power D-normal")
    scale = max(fro_norm(t), fro_norm(dd.dinv)) * max(fro_norm(a), fro_norm(b))
    base_res, base_ok = residual_of(a @ t - t @ b, tol, scale)
    if not base_ok:
        raise HypothesisViolatedError(f"A·T = T·B residual {base_res:.3e}")
    if hypothesis == REVERSE:
        extra = b @ t - t @ a
    elif hypothesis == DRAZIN_SKEW:
        extra = (a - b) @ dd.dinv - dd.dinv @ (b - a)
    elif hypothesis is None:
        extra = None
    else:
        raise ValueError(f"unknown hypothesis {hypothesis!r}")
    if extra is not None:
        extra_res, extra_ok = residual_of(extra, tol, scale)
        if not extra_ok:
            raise HypothesisViolatedError(
                f"{hypothesis} hypothesis residual {extra_res:.3e}"
            )
    tds = dd.dinv.adjoint()
    rep = Report(t.kernel)
    rep.check_zero("tdstar_a_eq_b_tdstar", tds @ a - b @ tds, tol, scale)
    rep.check_zero("tdstar_b_eq_a_tdstar", tds @ b - a @ tds, tol, scale)
    rep.check_zero("a_tdstar_eq_tdstar_b", a @ tds - tds @ b, tol, scale)
    rep.check_zero("b_tdstar_eq_tdstar_a", b @ tds - tds @ a, tol, scale)
    return rep


def _sorted_core_eigenvalues(core: Matrix) -> np.ndarray:
    if core.rows == 0:
        return np.zeros(0, dtype=np.complex128)
    evals = np.linalg.eigvals(core.to_complex_array())
    order = np.lexsort((np.angle(evals), np.abs(evals)))
    return evals[order]


def quasiaffinity_similarity(s: Matrix, t: Matrix, x: Matrix,
                             q: ClassQuery) -> Report:
    """Desk-scale check that an invertible intertwiner forces common structure.

    For S·X = X·T with S, T in the (n,m) D-normal class, verifies that the
    transformed intertwiner is block diagonal across the two core/nil
    decompositions, that the two normal cores share their eigenvalue multiset
    (within PAIRING_TOL after optimal matching), and that the nilpotent
    orders agree.  Runs in floating arithmetic; exact inputs are converted.
    """
    if not (s.is_square and t.is_square and s.shape == t.shape
            and x.shape == s.shape):
        raise ShapeMismatchError("intertwined operators must share one square shape")
    if not is_dn(s, q).ok():
        raise NotInClassError("left operator is not in the class")
    if not is_dn(t, q).ok():
        raise NotInClassError("right operator is not in the class")
    n = s.rows
    if rank(x) < n:
        raise NotInvertibleError("intertwiner is singular")
    res, ok = residual_of(s @ x - x @ t, q.tol,
                          scale=max(fro_norm(s), fro_norm(t)) * fro_norm(x))
    if not ok:
        raise NotIntertwiningError(f"S·X - X·T residual {res:.3e}")

    sf, tf, xf = s.to_float(), t.to_float(), x.to_float()
    dec_s = core_nilpotent(sf)
    dec_t = core_nilpotent(tf)
    rs, rt = dec_s.core_dim, dec_t.core_dim

    evals_s = _sorted_core_eigenvalues(dec_s.core)
    evals_t = _sorted_core_eigenvalues(dec_t.core)

    if rs:
        vs = Matrix.from_complex(np.linalg.eig(dec_s.core.to_complex_array())[1])
        left = direct_sum(inverse(vs), identity(n - rs, FLOAT)) @ inverse(dec_s.W)
    else:
        left = inverse(dec_s.W)
    if rt:
        vt = Matrix.from_complex(np.linalg.eig(dec_t.core.to_complex_array())[1])
        right = dec_t.W @ direct_sum(vt, identity(n - rt, FLOAT))
    else:
        right = dec_t.W
    y = left @ xf @ right

    rep = Report(s.kernel)
    off = fro_norm(y.submatrix(0, rs, rt, n)) + fro_norm(y.submatrix(rs, n, 0, rt))
    rep.check_value("intertwiner_block_diagonal", off, q.tol,
                    scale=max(fro_norm(y), 1.0))
    if rs != rt:
        rep.check_flag("core_spectra_match", False)
    else:
        if rs == 0:
            rep.check_value("core_spectra_match", 0.0, Tolerance(abs=PAIRING_TOL, rel=0.0))
        else:
            cost = np.abs(evals_s[:, None] - evals_t[None, :])
            rows, cols = scipy.optimize.linear_sum_assignment(cost)
            worst = float(cost[rows, cols].max())
            rep.check_value("core_spectra_match", worst,
                            Tolerance(abs=PAIRING_TOL, rel=0.0))
    rep.check_flag("nilpotent_orders_match",
                   drazin_index(sf) == drazin_index(tf))
    return rep
