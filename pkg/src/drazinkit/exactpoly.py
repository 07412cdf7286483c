"""Exact real polynomial helpers: characteristic polynomials and Sturm counts.

Used by the exact-kernel contraction test, where the operator norm itself is
irrational but "all eigenvalues of A*A lie in [0, 1]" is decidable over Q.
Polynomials are coefficient lists in descending degree order with Fraction
entries.
"""

from __future__ import annotations

from fractions import Fraction

from .matrices import EXACT, Matrix, identity


def charpoly_hermitian(h: Matrix) -> list[Fraction]:
    """Characteristic polynomial of an exact Hermitian matrix, descending coeffs.

    Faddeev-LeVerrier over Q: traces of powers of a Hermitian matrix are real,
    so every coefficient is a plain rational.
    """
    if h.kernel != EXACT:
        raise ValueError("exact kernel required")
    n = h.rows
    coeffs = [Fraction(1)]
    m = identity(n, EXACT)
    for k in range(1, n + 1):
        m = h @ m
        tr_re = sum((m.entry(i, i).re for i in range(n)), Fraction(0))
        tr_im = sum((m.entry(i, i).im for i in range(n)), Fraction(0))
        if tr_im != 0:
            raise ValueError("matrix is not Hermitian: complex trace")
        c = -tr_re / k
        coeffs.append(c)
        m = m + c * identity(n, EXACT)
    return coeffs


def poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def poly_deriv(p: list[Fraction]) -> list[Fraction]:
    n = len(p) - 1
    if n <= 0:
        return [Fraction(0)]
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _trim(p: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = _trim(list(num))
    den = _trim(list(den))
    if den == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [Fraction(0)], num
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    rem = list(num)
    lead = den[0]
    for i in range(len(quot)):
        f = rem[i] / lead
        quot[i] = f
        if f != 0:
            for j, d in enumerate(den):
                rem[i + j] -= f * d
    return _trim(quot), _trim(rem)


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [_trim(p), _trim(poly_deriv(p))]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        rem = poly_divmod(chain[-2], chain[-1])[1]
        rem = [-c for c in rem]
        if _trim(rem) == [Fraction(0)]:
            break
        chain.append(_trim(rem))
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_roots_above(p: list[Fraction], x0: Fraction) -> int:
    """Number of distinct real roots of p strictly greater than x0.

    Roots exactly at x0 are divided out first, so unit eigenvalues do not
    disturb the count.
    """
    p = _trim(list(p))
    if len(p) == 1:
        return 0
    while poly_eval(p, x0) == 0:
        p = poly_divmod(p, [Fraction(1), -x0])[0]
        if len(p) == 1:
            return 0
    chain = _sturm_chain(p)
    at_x0 = [1 if poly_eval(q, x0) > 0 else (-1 if poly_eval(q, x0) < 0 else 0)
             for q in chain]
    at_inf = [1 if q[0] > 0 else (-1 if q[0] < 0 else 0) for q in chain]
    return _variations(at_x0) - _variations(at_inf)
