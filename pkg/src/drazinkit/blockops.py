"""Upper-triangular 2x2 block operators [[T, C], [0, S]].

Carries the closed-form coupling block of the Drazin inverse, the adapted
(core/nil) representation of the coupling, the simple-pole equivalence
"block is D-normal iff the coupling lives entirely on the nilpotent parts",
and the sufficiency of that condition for general (n, m).
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import ClassQuery, is_dn
from .drazin import Decomposition, core_nilpotent, drazin_inverse
from .errors import (
    CouplingNotAdmissibleError,
    IndexTooHighError,
    NonOrthogonalBasisError,
    NotInClassError,
    ShapeMismatchError,
)
from .matrices import (
    EXACT,
    Matrix,
    Tolerance,
    fro_norm,
    hstack,
    identity,
    residual_of,
    solve,
    vstack,
    zeros,
)
from .report import Report


@dataclass(frozen=True)
class BlockTriple:
    """Blocks of [[T, C], [0, S]]: T square t, S square s, C of shape t x s."""

    T: Matrix
    C: Matrix
    S: Matrix

    def __post_init__(self):
        if not (self.T.is_square and self.S.is_square):
            raise ShapeMismatchError("diagonal blocks must be square")
        if self.C.shape != (self.T.rows, self.S.rows):
            raise ShapeMismatchError(
                f"coupling must be {self.T.rows}x{self.S.rows}, got {self.C.shape}"
            )
        if len({self.T.kernel, self.C.kernel, self.S.kernel}) != 1:
            raise ShapeMismatchError("triple mixes kernels")

    @property
    def kernel(self) -> str:
        return self.T.kernel

    def to_json(self) -> dict:
        from .matrices import matrix_to_json

        return {
            "T": matrix_to_json(self.T),
            "C": matrix_to_json(self.C),
            "S": matrix_to_json(self.S),
        }


@dataclass(frozen=True)
class AdaptedCoupling:
    """The coupling written over the core/nil bases of T (rows) and S (columns)."""

    c11: Matrix
    c12: Matrix
    c21: Matrix
    c22: Matrix
    w_rows: Matrix
    w_cols: Matrix

    def reassemble(self) -> Matrix:
        """Undo the change of bases; recovers the original coupling."""
        top = hstack(self.c11, self.c12)
        bottom = hstack(self.c21, self.c22)
        from .matrices import inverse

        return self.w_rows @ vstack(top, bottom) @ inverse(self.w_cols)

    def forbidden_blocks_zero(self, tol: Tolerance, scale: float) -> tuple[Report, bool]:
        rep = Report(self.c11.kernel)
        ok11 = rep.check_zero("coupling_c11_zero", self.c11, tol, scale)
        ok12 = rep.check_zero("coupling_c12_zero", self.c12, tol, scale)
        ok21 = rep.check_zero("coupling_c21_zero", self.c21, tol, scale)
        return rep, ok11 and ok12 and ok21


def assemble(bt: BlockTriple) -> Matrix:
    top = hstack(bt.T, bt.C)
    bottom = hstack(zeros(bt.S.rows, bt.T.rows, bt.kernel), bt.S)
    return vstack(top, bottom)


def block_drazin_inverse(bt: BlockTriple,
                         tol: Tolerance | None = None) -> tuple[Matrix, Matrix]:
    """Drazin inverse of the assembled block matrix from the coupling formula.

    X = [sum_{j<q} T_d^{j+2} C S^j](I - S S_d)
        + (I - T T_d)[sum_{j<p} T^j C S_d^{j+2}] - T_d C S_d
    with p, q the Drazin indices of T and S; returns (A_d, X).
    """
    t, c, s = bt.T, bt.C, bt.S
    ddt = drazin_inverse(t, tol)
    dds = drazin_inverse(s, tol)
    td, sd = ddt.dinv, dds.dinv
    p, q = ddt.index, dds.index
    it = identity(t.rows, bt.kernel)
    i_s = identity(s.rows, bt.kernel)

    sum1 = zeros(t.rows, s.rows, bt.kernel)
    td_pow = td @ td
    s_pow = i_s
    for _ in range(q):
        sum1 = sum1 + td_pow @ c @ s_pow
        td_pow = td_pow @ td
        s_pow = s_pow @ s
    sum1 = sum1 @ (i_s - s @ sd)

    sum2 = zeros(t.rows, s.rows, bt.kernel)
    t_pow = it
    sd_pow = sd @ sd
    for _ in range(p):
        sum2 = sum2 + t_pow @ c @ sd_pow
        t_pow = t_pow @ t
        sd_pow = sd_pow @ sd
    sum2 = (it - t @ td) @ sum2

    x = sum1 + sum2 - td @ c @ sd
    ad = vstack(hstack(td, x), hstack(zeros(s.rows, t.rows, bt.kernel), sd))
    return ad, x


def _adapt(dec_t: Decomposition, dec_s: Decomposition, c: Matrix,
           tol: Tolerance | None) -> AdaptedCoupling:
    adapted = solve(dec_t.W, c @ dec_s.W, tol)
    rt, rs = dec_t.core_dim, dec_s.core_dim
    t_n, s_n = c.rows, c.cols
    return AdaptedCoupling(
        c11=adapted.submatrix(0, rt, 0, rs),
        c12=adapted.submatrix(0, rt, rs, s_n),
        c21=adapted.submatrix(rt, t_n, 0, rs),
        c22=adapted.submatrix(rt, t_n, rs, s_n),
        w_rows=dec_t.W,
        w_cols=dec_s.W,
    )


def adapt_coupling(bt: BlockTriple, tol: Tolerance | None = None) -> AdaptedCoupling:
    """Express C over the core/nil bases of T (rows) and S (columns)."""
    return _adapt(core_nilpotent(bt.T, tol), core_nilpotent(bt.S, tol), bt.C, tol)


def _require_orthogonal_split(dec: Decomposition, which: str) -> None:
    """Exact kernel: core and nil basis columns must span orthogonal subspaces."""
    q = dec.W.submatrix(0, dec.W.rows, 0, dec.core_dim)
    k = dec.W.submatrix(0, dec.W.rows, dec.core_dim, dec.W.cols)
    if not (q.adjoint() @ k).is_zero():
        raise NonOrthogonalBasisError(
            f"core/nil split of {which} is not orthogonal; "
            "blockwise adjoints would not match the ambient adjoint"
        )


def coupling_equivalence(bt: BlockTriple, tol: Tolerance | None = None) -> Report:
    """At simple poles: assembled block is D-normal iff C = 0 + c22.

    Both diagonal blocks must be (1,1)-power D-normal with Drazin index at
    most 1; index 0 (an invertible block) is admitted as a degenerate simple
    pole and flagged in the report notes.
    """
    tol = tol or Tolerance()
    q11 = ClassQuery(1, 1, tol)
    if not is_dn(bt.T, q11).ok() or not is_dn(bt.S, q11).ok():
        raise NotInClassError("both diagonal blocks must be (1,1)-power D-normal")
    dec_t = core_nilpotent(bt.T, tol)
    dec_s = core_nilpotent(bt.S, tol)
    if dec_t.index > 1 or dec_s.index > 1:
        raise IndexTooHighError(
            f"indices ({dec_t.index}, {dec_s.index}) exceed a simple pole"
        )
    if bt.kernel == EXACT:
        _require_orthogonal_split(dec_t, "T")
        _require_orthogonal_split(dec_s, "S")
    adapted = _adapt(dec_t, dec_s, bt.C, tol)
    rep = Report(bt.kernel)
    blocks_rep, rhs = adapted.forbidden_blocks_zero(tol, scale=max(fro_norm(bt.C), 1.0))
    rep.merge(blocks_rep)
    lhs = is_dn(assemble(bt), q11).ok()
    rep.check_flag("dn_assembled", lhs)
    rep.check_flag("equivalence", lhs == rhs)
    if dec_t.index == 0 or dec_s.index == 0:
        rep.notes["degenerate_simple_pole"] = (
            "an invertible diagonal block (index 0) was admitted"
        )
    return rep


def coupling_sufficiency(bt: BlockTriple, q: ClassQuery) -> Report:
    """C supported on the nilpotent parts keeps the block in the (n,m) class.

    Also certifies the mechanism: the coupling block of the Drazin inverse
    vanishes for admissible C.
    """
    if not is_dn(bt.T, q).ok() or not is_dn(bt.S, q).ok():
        raise NotInClassError(
            f"both diagonal blocks must be ({q.n},{q.m})-power D-normal"
        )
    adapted = adapt_coupling(bt, q.tol)
    scale = max(fro_norm(bt.C), 1.0)
    _, admissible = adapted.forbidden_blocks_zero(q.tol, scale)
    if not admissible:
        raise CouplingNotAdmissibleError(
            "coupling has a nonzero component outside the nilpotent parts"
        )
    rep = Report(bt.kernel)
    rep.merge(is_dn(assemble(bt), q), prefix="assembled_")
    _, x = block_drazin_inverse(bt, q.tol)
    rep.check_zero("coupling_response_zero", x, q.tol, scale)
    return rep
