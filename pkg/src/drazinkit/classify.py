"""Operator-class predicates built on the Drazin inverse.

The two central classes: A is (n,m)-power D-normal when A_d^n commutes with
(A*)^m, and (n,m)-power D-quasinormal when A_d^n commutes with (A*)^m·A.
Commutator residuals are scaled by products of factor norms so verdicts are
scale-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .drazin import DrazinData, drazin_inverse
from .errors import ShapeMismatchError
from .exactpoly import charpoly_hermitian, count_roots_above
from .matrices import (
    EXACT,
    FLOAT,
    DEFAULT_TOL,
    Matrix,
    Tolerance,
    commutator,
    fro_norm,
    operator_norm_estimate,
)
from .report import Report


@dataclass(frozen=True)
class ClassQuery:
    """Power pair (n, m) plus the tolerance verdicts are judged against."""

    n: int
    m: int
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive integers")


def _require_square(a: Matrix):
    if not a.is_square:
        raise ShapeMismatchError("classification needs a square matrix")


def is_normal(a: Matrix, tol: Tolerance | None = None) -> Report:
    """Does A commute with its adjoint?"""
    _require_square(a)
    tol = tol or DEFAULT_TOL
    rep = Report(a.kernel)
    rep.check_zero("normal", commutator(a.adjoint(), a), tol,
                   scale=fro_norm(a) ** 2)
    return rep


def is_dn(a: Matrix, q: ClassQuery, dinv: DrazinData | None = None) -> Report:
    """(n,m)-power D-normal test: [A_d^n, (A*)^m] = 0.

    Pass a precomputed DrazinData to amortize the inverse across queries.
    """
    _require_square(a)
    dd = dinv if dinv is not None else drazin_inverse(a)
    rep = Report(a.kernel)
    diff = commutator(dd.dinv ** q.n, a.adjoint() ** q.m)
    rep.check_zero("dn", diff, q.tol,
                   scale=fro_norm(dd.dinv) ** q.n * fro_norm(a) ** q.m)
    return rep


def is_dqn(a: Matrix, q: ClassQuery, dinv: DrazinData | None = None) -> Report:
    """(n,m)-power D-quasinormal test: [A_d^n, (A*)^m·A] = 0."""
    _require_square(a)
    dd = dinv if dinv is not None else drazin_inverse(a)
    rep = Report(a.kernel)
    diff = commutator(dd.dinv ** q.n, a.adjoint() ** q.m @ a)
    rep.check_zero("dqn", diff, q.tol,
                   scale=fro_norm(dd.dinv) ** q.n * fro_norm(a) ** (q.m + 1))
    return rep


def is_m_partial_isometry(a: Matrix, m: int, tol: Tolerance | None = None) -> Report:
    """m-partial isometry test: A^m (A*)^m A^m = A^m."""
    _require_square(a)
    if m < 1:
        raise ValueError("m must be a positive integer")
    tol = tol or DEFAULT_TOL
    am = a ** m
    lhs = am @ am.adjoint() @ am
    rep = Report(a.kernel)
    rep.check_zero("m_partial_isometry", lhs - am, tol,
                   scale=max(fro_norm(lhs), fro_norm(am)))
    return rep


def is_contraction(a: Matrix, tol: Tolerance | None = None) -> Report:
    """Operator norm at most 1.

    Float kernel: checks the largest singular value against 1 + tol.  Exact
    kernel: decides whether the characteristic polynomial of A*A has any root
    above 1 by Sturm sign counting, which keeps the verdict exact even though
    the norm itself is irrational.
    """
    _require_square(a)
    tol = tol or DEFAULT_TOL
    rep = Report(a.kernel)
    if a.kernel == FLOAT:
        excess = max(0.0, operator_norm_estimate(a) - 1.0)
        rep.check_value("contraction", excess, tol, scale=1.0)
        return rep
    gram = a.adjoint() @ a
    above = count_roots_above(charpoly_hermitian(gram), Fraction(1))
    if above == 0:
        rep.verdicts["contraction"] = True
        rep.residuals["contraction"] = 0.0
    else:
        # Residual reported from a float estimate; the verdict stays exact.
        excess = max(operator_norm_estimate(a.to_float()) - 1.0, 5e-324)
        rep.verdicts["contraction"] = False
        rep.residuals["contraction"] = excess
    return rep
