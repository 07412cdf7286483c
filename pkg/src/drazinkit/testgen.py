"""Seeded generators of structured random instances for property campaigns.

Everything is a pure function of a GenSpec: the PRNG is counter-based
(numpy Philox, algorithm id "philox4x64"), so identical specs reproduce
identical instances across runs and platforms, bitwise in the exact kernel.
Instances are built in block form (invertible core first, strictly
upper-triangular nilpotent part last) so that the core/nil split is an
orthogonal direct sum by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .blockops import BlockTriple
from .classify import ClassQuery
from .drazin import core_nilpotent
from .errors import UnsatisfiableSpecError
from .intertwine import IntertwiningInstance
from .matrices import (
    EXACT,
    FLOAT,
    GaussianRational,
    Matrix,
    columnspace_basis,
    diagonal,
    direct_sum,
    identity,
    inverse,
    operator_norm_estimate,
    rank,
    zeros,
)

RNG_ALGORITHM = "philox4x64"

# Unit-modulus Gaussian rationals (|z| = 1 exactly).
_UNIT_PHASES = [
    GaussianRational(1), GaussianRational(-1),
    GaussianRational(0, 1), GaussianRational(0, -1),
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(3, 5), Fraction(-4, 5)),
    GaussianRational(Fraction(4, 5), Fraction(3, 5)),
    GaussianRational(Fraction(4, 5), Fraction(-3, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(12, 13), Fraction(-5, 13)),
]

# Rational cosine/sine pairs with c^2 + s^2 = 1.
_COS_SIN = [
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
    (Fraction(7, 25), Fraction(24, 25)),
    (Fraction(20, 29), Fraction(21, 29)),
]


@dataclass(frozen=True)
class GenSpec:
    """Reproducible generator parameters; identical specs yield identical output."""

    seed: int
    size: int
    index_cap: int = 2
    kernel: str = EXACT
    entry_bound: int = 4

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be at least 1")
        if not 0 <= self.index_cap <= 3:
            raise ValueError("index_cap must lie in 0..3")
        if self.kernel not in (EXACT, FLOAT):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed & (2**64 - 1)))

    def with_seed(self, seed: int) -> "GenSpec":
        return replace(self, seed=seed)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "size": self.size,
            "index_cap": self.index_cap,
            "kernel": self.kernel,
            "entry_bound": self.entry_bound,
            "algorithm": RNG_ALGORITHM,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GenSpec":
        return cls(
            seed=int(obj["seed"]),
            size=int(obj["size"]),
            index_cap=int(obj.get("index_cap", 2)),
            kernel=obj.get("kernel", EXACT),
            entry_bound=int(obj.get("entry_bound", 4)),
        )


# -- scalar draws ------------------------------------------------------------


def _rand_fraction(rng, bound: int, nonzero: bool = False) -> Fraction:
    while True:
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        f = Fraction(num, den)
        if f != 0 or not nonzero:
            return f


def _rand_gr(rng, bound: int, nonzero: bool = False) -> GaussianRational:
    while True:
        g = GaussianRational(_rand_fraction(rng, bound), _rand_fraction(rng, bound))
        if not g.is_zero() or not nonzero:
            return g


def _rand_scalar(rng, kernel: str, bound: int, nonzero: bool = False):
    if kernel == EXACT:
        return _rand_gr(rng, bound, nonzero)
    while True:
        z = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
        if z != 0 or not nonzero:
            return z


def _rand_invertible_scalar(rng, kernel: str, bound: int):
    """Nonzero scalar kept away from 0 in float so cores stay well conditioned."""
    if kernel == EXACT:
        return _rand_gr(rng, bound, nonzero=True)
    mag = rng.uniform(0.4, 2.0)
    ang = rng.uniform(0.0, 2.0 * math.pi)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


# -- unitaries ---------------------------------------------------------------


def rational_unitary(rng, n: int) -> Matrix:
    """Exactly unitary matrix over the Gaussian rationals (Givens x phases)."""
    u = identity(n, EXACT)
    if n == 0:
        return u
    for _ in range(2 * n):
        if n >= 2:
            i = int(rng.integers(0, n - 1))
            j = int(rng.integers(i + 1, n))
            c, s = _COS_SIN[int(rng.integers(0, len(_COS_SIN)))]
            if rng.integers(0, 2):
                c, s = s, c
            if rng.integers(0, 2):
                s = -s
            g = [[GaussianRational(1) if a == b else GaussianRational(0)
                  for b in range(n)] for a in range(n)]
            g[i][i] = GaussianRational(c)
            g[i][j] = GaussianRational(-s)
            g[j][i] = GaussianRational(s)
            g[j][j] = GaussianRational(c)
            u = u @ Matrix.exact(g)
    phases = diagonal(
        [_UNIT_PHASES[int(rng.integers(0, len(_UNIT_PHASES)))] for _ in range(n)],
        EXACT,
    )
    return u @ phases


def haar_unitary(rng, n: int) -> Matrix:
    if n == 0:
        return identity(0, FLOAT)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Matrix.from_complex(q)


def _unitary(rng, n: int, kernel: str) -> Matrix:
    return rational_unitary(rng, n) if kernel == EXACT else haar_unitary(rng, n)


# -- building blocks ---------------------------------------------------------


def _nilpotent_block(rng, dim: int, order: int, kernel: str, bound: int) -> Matrix:
    """Strictly upper-triangular nilpotent of exact nilpotency order `order`.

    Built from shift chains: the first chain has length `order`, the rest are
    random shorter chains, so N^(order-1) != 0 = N^order whenever dim > 0.
    """
    if dim == 0:
        return zeros(0, 0, kernel)
    if order <= 1:
        return zeros(dim, dim, kernel)
    lengths = [order]
    remaining = dim - order
    while remaining > 0:
        l = int(rng.integers(1, min(order, remaining) + 1))
        lengths.append(l)
        remaining -= l
    entries = [[None] * dim for _ in range(dim)]
    offset = 0
    for l in lengths:
        for k in range(l - 1):
            # Chain entries stay O(1) in float so rank cutoffs never wobble.
            entries[offset + k][offset + k + 1] = _rand_invertible_scalar(
                rng, kernel, bound
            )
        offset += l
    if kernel == EXACT:
        zero = GaussianRational(0)
        data = tuple(
            tuple(e if e is not None else zero for e in row) for row in entries
        )
        return Matrix(EXACT, dim, dim, data)
    arr = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            if e is not None:
                arr[i, j] = e
    return Matrix.from_complex(arr)


def _normal_core(rng, r: int, kernel: str, bound: int) -> Matrix:
    if r == 0:
        return zeros(0, 0, kernel)
    d = [_rand_invertible_scalar(rng, kernel, bound) for _ in range(r)]
    u = _unitary(rng, r, kernel)
    return u @ diagonal(d, kernel) @ u.adjoint()


def _involution_core(rng, r: int, kernel: str, bound: int) -> Matrix:
    """Non-normal invertible core with core^2 = I (a scaled involution)."""
    a = _rand_fraction(rng, bound, nonzero=True)
    while abs(a) == 1:
        a = _rand_fraction(rng, bound, nonzero=True)
    if kernel == EXACT:
        two = Matrix.exact([[0, a], [1 / a, 0]])
    else:
        af = float(a)
        two = Matrix.from_complex([[0.0, af], [1.0 / af, 0.0]])
    core = two
    if r > 2:
        core = direct_sum(two, _normal_core(rng, r - 2, kernel, bound))
    u = _unitary(rng, r, kernel)
    return u @ core @ u.adjoint()


def _split(rng, size: int, index_cap: int, min_core: int) -> tuple[int, int, int]:
    """Choose (core dim, nil dim, nilpotency order) respecting the caps."""
    if index_cap == 0:
        return size, 0, 0
    z_max = size - min_core
    z = int(rng.integers(0, z_max + 1)) if z_max > 0 else 0
    r = size - z
    order = 0 if z == 0 else int(rng.integers(1, min(z, index_cap) + 1))
    return r, z, order


def _gen_dn_parts(rng, spec: GenSpec, q: ClassQuery, variant: str,
                  min_core: int = 0) -> tuple[Matrix, int]:
    if variant == "involution":
        if q.n % 2 and q.m % 2:
            raise UnsatisfiableSpecError(
                f"a scaled involution core is not ({q.n},{q.m})-power D-normal "
                "unless n or m is even"
            )
        if spec.size < 2:
            raise UnsatisfiableSpecError("involution cores need dimension >= 2")
        min_core = max(min_core, 2)
    r, z, order = _split(rng, spec.size, spec.index_cap, min_core)
    if variant == "auto":
        involution_ok = (q.n % 2 == 0 or q.m % 2 == 0) and r >= 2
        variant = "involution" if involution_ok and rng.integers(0, 3) == 0 \
            else "normal"
    if variant == "normal":
        core = _normal_core(rng, r, spec.kernel, spec.entry_bound)
    elif variant == "involution":
        core = _involution_core(rng, r, spec.kernel, spec.entry_bound)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    nil = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    return direct_sum(core, nil), r


def gen_dn(spec: GenSpec, q: ClassQuery, variant: str = "auto") -> Matrix:
    """Member of the (n,m)-power D-normal class: normal-or-involution core
    plus a strictly upper-triangular nilpotent block."""
    return _gen_dn_parts(spec.rng(), spec, q, variant)[0]


def gen_random(spec: GenSpec) -> Matrix:
    """Unstructured dense matrix; the negative control for class campaigns."""
    rng = spec.rng()
    n = spec.size
    if spec.kernel == EXACT:
        return Matrix.exact(
            [[_rand_gr(rng, spec.entry_bound) for _ in range(n)] for _ in range(n)]
        )
    return Matrix.from_complex(
        rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    )


def gen_with_index(spec: GenSpec) -> Matrix:
    """General matrix with controlled Drazin index: unitary conjugate of an
    arbitrary invertible core plus nilpotent chains.

    Float cores are built as U·diag(d)·V* with singular values in [0.4, 2],
    generic and non-normal but never close to singular.
    """
    rng = spec.rng()
    r, z, order = _split(rng, spec.size, spec.index_cap, min_core=0)
    if spec.kernel == EXACT:
        while True:
            core = Matrix.exact(
                [[_rand_gr(rng, spec.entry_bound) for _ in range(r)]
                 for _ in range(r)]
            )
            if rank(core) == r:
                break
    else:
        d = [_rand_invertible_scalar(rng, FLOAT, spec.entry_bound)
             for _ in range(r)]
        core = haar_unitary(rng, r) @ diagonal(d, FLOAT) \
            @ haar_unitary(rng, r).adjoint()
    nil = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    u = _unitary(rng, spec.size, spec.kernel)
    return u @ direct_sum(core, nil) @ u.adjoint()


def gen_commuting_with(t: Matrix, spec: GenSpec) -> Matrix:
    """X commuting with T: a polynomial in T plus a block-commutant term."""
    rng = spec.rng()
    n = t.rows
    deg = min(n, 4)
    x = zeros(n, n, t.kernel)
    power = identity(n, t.kernel)
    for _ in range(deg + 1):
        x = x + power * _rand_scalar(rng, t.kernel, spec.entry_bound)
        power = power @ t
    dec = core_nilpotent(t)
    z = n - dec.core_dim
    if z > 0:
        extra = zeros(z, z, t.kernel)
        npow = identity(z, t.kernel)
        for _ in range(min(z, 3) + 1):
            extra = extra + npow * _rand_scalar(rng, t.kernel, spec.entry_bound)
            npow = npow @ dec.nil
        lift = dec.W @ direct_sum(zeros(dec.core_dim, dec.core_dim, t.kernel),
                                  extra) @ inverse(dec.W)
        x = x + lift
    return x


def gen_block_triple(spec: GenSpec, q: ClassQuery,
                     admissible: bool = True) -> BlockTriple:
    """Triple (T, C, S) with both diagonal blocks in the class and the
    coupling supported on the nilpotent parts (admissible) or deliberately
    leaking into a forbidden block (inadmissible)."""
    rng = spec.rng()
    t_size = int(rng.integers(1, spec.size + 1))
    s_size = int(rng.integers(1, spec.size + 1))
    t_spec = replace(spec, size=t_size)
    s_spec = replace(spec, size=s_size)
    t, rt = _gen_dn_parts(rng, t_spec, q, "auto", min_core=1)
    s, rs = _gen_dn_parts(rng, s_spec, q, "auto", min_core=1)
    entries = [[None] * s_size for _ in range(t_size)]
    for i in range(rt, t_size):
        for j in range(rs, s_size):
            entries[i][j] = _rand_scalar(rng, spec.kernel, spec.entry_bound)
    if not admissible:
        regions = []
        if rt and rs:
            regions.append((0, rt, 0, rs))
        if rt and s_size > rs:
            regions.append((0, rt, rs, s_size))
        if t_size > rt and rs:
            regions.append((rt, t_size, 0, rs))
        if not regions:
            raise UnsatisfiableSpecError("no forbidden block exists to violate")
        r0, r1, c0, c1 = regions[int(rng.integers(0, len(regions)))]
        i = int(rng.integers(r0, r1))
        j = int(rng.integers(c0, c1))
        entries[i][j] = _rand_scalar(rng, spec.kernel, spec.entry_bound,
                                     nonzero=True)
    if spec.kernel == EXACT:
        zero = GaussianRational(0)
        c = Matrix(EXACT, t_size, s_size, tuple(
            tuple(e if e is not None else zero for e in row) for row in entries
        ))
    else:
        arr = np.zeros((t_size, s_size), dtype=np.complex128)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if e is not None:
                    arr[i, j] = e
        c = Matrix.from_complex(arr)
    return BlockTriple(T=t, C=c, S=s)


def gen_intertwined_triple(spec: GenSpec) -> IntertwiningInstance:
    """(T, A, B) with T in the (1,1) class, A·T = T·B, and both extra
    commutation hypotheses satisfied.

    Core eigenvalues come in +/- pairs so the core intertwiners have a
    nontrivial joint commutant; the nilpotent parts ride on polynomials in
    the nil block.
    """
    rng = spec.rng()
    n = spec.size
    min_core = 2 if n >= 2 else 1
    r, z, order = _split(rng, n, spec.index_cap, min_core)
    d = []
    while len(d) < r:
        val = _rand_invertible_scalar(rng, spec.kernel, spec.entry_bound)
        if len(d) + 2 <= r and rng.integers(0, 2):
            d.extend([val, -val])
        else:
            d.append(val)
    u = _unitary(rng, r, spec.kernel)
    t1 = u @ diagonal(d, spec.kernel) @ u.adjoint()

    def allowed(i, j):
        return d[j] == d[i] or d[j] == -d[i]

    a_tilde = [[None] * r for _ in range(r)]
    b_tilde = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if allowed(i, j) and rng.integers(0, 2):
                val = _rand_scalar(rng, spec.kernel, spec.entry_bound)
                a_tilde[i][j] = val
                b_tilde[i][j] = val * (d[j] / d[i])
    a_tilde[0][0] = _rand_scalar(rng, spec.kernel, spec.entry_bound, nonzero=True)
    b_tilde[0][0] = a_tilde[0][0]

    def densify(cells):
        if spec.kernel == EXACT:
            zero = GaussianRational(0)
            return Matrix(EXACT, r, r, tuple(
                tuple(e if e is not None else zero for e in row) for row in cells
            ))
        arr = np.zeros((r, r), dtype=np.complex128)
        for i, row in enumerate(cells):
            for j, e in enumerate(row):
                if e is not None:
                    arr[i, j] = e
        return Matrix.from_complex(arr)

    a11 = u @ densify(a_tilde) @ u.adjoint()
    b11 = u @ densify(b_tilde) @ u.adjoint()

    def dense_random(dim):
        if spec.kernel == EXACT:
            return Matrix.exact([[_rand_gr(rng, spec.entry_bound)
                                  for _ in range(dim)] for _ in range(dim)])
        return Matrix.from_complex(rng.uniform(-1, 1, (dim, dim))
                                   + 1j * rng.uniform(-1, 1, (dim, dim)))

    nil = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    if z == 0:
        a22 = b22 = zeros(0, 0, spec.kernel)
    elif nil.is_zero():
        # Zero nilpotent block intertwines with anything.
        a22 = dense_random(z)
        b22 = dense_random(z)
    else:
        poly = zeros(z, z, spec.kernel)
        npow = identity(z, spec.kernel)
        for _ in range(min(z, 3) + 1):
            poly = poly + npow * _rand_scalar(rng, spec.kernel, spec.entry_bound)
            npow = npow @ nil
        a22 = poly
        b22 = poly + (nil ** (order - 1)) * _rand_scalar(
            rng, spec.kernel, spec.entry_bound
        )
    t = direct_sum(t1, nil)
    a = direct_sum(a11, a22)
    b = direct_sum(b11, b22)
    return IntertwiningInstance(T=t, A=a, B=b)


def gen_partial_isometry(spec: GenSpec, m: int) -> Matrix:
    """m-partially isometric contraction: unitary core plus a nilpotent block
    of order at most m, scaled strictly below unit norm."""
    rng = spec.rng()
    n = spec.size
    r, z, order = _split(rng, n, min(spec.index_cap, m), min_core=1)
    u = _unitary(rng, r, spec.kernel)
    nil = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    if z and not nil.is_zero():
        norm = operator_norm_estimate(nil.to_float())
        if spec.kernel == EXACT:
            nil = nil * Fraction(1, int(norm) + 2)
        else:
            nil = nil * (0.8 / norm)
    return direct_sum(u, nil)


def gen_doubly_commuting_pair(spec: GenSpec) -> tuple[Matrix, Matrix]:
    """(S, T) with [S, T] = 0 = [S*, T], both in every (n,m) class: common
    unitary conjugate of (diagonal + nilpotent) and (diagonal + zero)."""
    rng = spec.rng()
    n = spec.size
    r, z, order = _split(rng, n, spec.index_cap, min_core=1)
    ds = [_rand_invertible_scalar(rng, spec.kernel, spec.entry_bound)
          for _ in range(r)]
    dt = [_rand_invertible_scalar(rng, spec.kernel, spec.entry_bound)
          for _ in range(r)]
    nil = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    v = _unitary(rng, n, spec.kernel)
    s = v @ direct_sum(diagonal(ds, spec.kernel), nil) @ v.adjoint()
    t = v @ direct_sum(diagonal(dt, spec.kernel),
                       zeros(z, z, spec.kernel)) @ v.adjoint()
    return s, t


def gen_quasiaffinity_instance(spec: GenSpec) -> tuple[Matrix, Matrix, Matrix]:
    """(S, T, X) with S·X = X·T, X invertible, S and T in the class: the
    intertwiner is unitary on the cores and an arbitrary similarity on the
    nilpotent parts."""
    rng = spec.rng()
    n = spec.size
    r, z, order = _split(rng, n, spec.index_cap, min_core=1)
    core_t = _normal_core(rng, r, spec.kernel, spec.entry_bound)
    nil_t = _nilpotent_block(rng, z, order, spec.kernel, spec.entry_bound)
    u = _unitary(rng, r, spec.kernel)
    while True:
        if spec.kernel == EXACT:
            p = Matrix.exact([[_rand_gr(rng, spec.entry_bound) for _ in range(z)]
                              for _ in range(z)])
            if rank(p) == z:
                break
        else:
            p = Matrix.from_complex(np.eye(z) + 0.3 * (
                rng.uniform(-1, 1, (z, z)) + 1j * rng.uniform(-1, 1, (z, z))
            ))
            if z == 0 or np.linalg.cond(p.to_complex_array()) < 50:
                break
    t = direct_sum(core_t, nil_t)
    s = direct_sum(u @ core_t @ u.adjoint(), p @ nil_t @ inverse(p))
    x = direct_sum(u, p)
    return s, t, x
