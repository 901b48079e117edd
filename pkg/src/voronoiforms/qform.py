"""Positive quadratic forms over the rationals.

Lattice enumeration uses an exact LDL^T decomposition: a form is written as
``sum_i q_i (z_i + sum_{j>i} mu_ij z_j)^2`` and coordinates are bounded from the
last to the first with exact integer ranges, so every enumeration is complete.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exactgeom import (
    Infeasible,
    RationalMatrix,
    dot,
    frac,
    invert,
    linprog_max,
    matrix,
    rank,
)


class DimensionMismatch(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class NotEutactic(ValueError):
    pass


class NotMember(ValueError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    gram: RationalMatrix

    def __post_init__(self):
        g = matrix(self.gram)
        if not g.is_symmetric():
            raise ValueError("Gram matrix must be square and symmetric")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_rows(cls, rows) -> "QuadraticForm":
        return cls(matrix(rows))

    @classmethod
    def identity(cls, n: int) -> "QuadraticForm":
        return cls(RationalMatrix.identity(n))

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def __call__(self, v) -> Fraction:
        return evaluate(self, v)

    def bilinear(self, u, v) -> Fraction:
        return dot(u, self.gram @ tuple(v))

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.gram + other.gram)

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.gram - other.gram)

    def scale(self, c) -> "QuadraticForm":
        return QuadraticForm(self.gram.scale(c))

    @property
    def rows(self):
        return self.gram.rows

    def is_positive_definite(self) -> bool:
        try:
            ldl(self)
        except NotPositiveDefinite:
            return False
        return True

    def is_positive_semidefinite(self) -> bool:
        # all principal minors >= 0
        import itertools

        n = self.n
        for k in range(1, n + 1):
            for idx in itertools.combinations(range(n), k):
                sub = [[self.gram.rows[i][j] for j in idx] for i in idx]
                if RationalMatrix(tuple(map(tuple, sub))).det() < 0:
                    return False
        return True


def blend(Q0: QuadraticForm, Q1: QuadraticForm, t) -> QuadraticForm:
    """The form (1-t) Q0 + t Q1."""
    t = frac(t)
    return Q0.scale(1 - t) + Q1.scale(t)


def _check_dim(Q: QuadraticForm, v) -> None:
    if len(v) != Q.n:
        raise DimensionMismatch(f"vector of length {len(v)} for a form of dimension {Q.n}")


def evaluate(Q: QuadraticForm, v) -> Fraction:
    _check_dim(Q, v)
    return dot(v, Q.gram @ tuple(v))


def trace_product(A: QuadraticForm, B: QuadraticForm) -> Fraction:
    if A.n != B.n:
        raise DimensionMismatch("forms of different dimension")
    return sum((A.gram.rows[i][j] * B.gram.rows[j][i] for i in range(A.n) for j in range(A.n)), Fraction(0))


def rank_one(v) -> QuadraticForm:
    """The form (v.x)^2."""
    return QuadraticForm(RationalMatrix(tuple(tuple(a * b for b in v) for a in v)))


def dual(Q: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(invert(Q.gram))


def transform(Q: QuadraticForm, U) -> QuadraticForm:
    """Form x -> Q(U x), Gram U^T G U.  U must be unimodular."""
    U = matrix(U)
    if U.shape != (Q.n, Q.n):
        raise DimensionMismatch("transformation has the wrong shape")
    if not U.is_integral() or abs(U.det()) != 1:
        raise NotUnimodular("transformation is not an integral unimodular matrix")
    return QuadraticForm(U.T @ Q.gram @ U)


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class LDL:
    """q[i] > 0 and mu[i][j] (j > i) with Q(y) = sum q_i (y_i + sum_j mu_ij y_j)^2."""

    q: tuple
    mu: tuple


def ldl(Q: QuadraticForm) -> LDL:
    n = Q.n
    a = [list(r) for r in Q.gram.rows]
    q = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = a[i][i]
        if d <= 0:
            raise NotPositiveDefinite("form is not positive definite")
        q.append(d)
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= a[i][j] * a[i][k] / d
    return LDL(tuple(q), tuple(tuple(r) for r in mu))


def _isqrt_floor(r: Fraction) -> int:
    """floor(sqrt(r)) for r >= 0."""
    return math.isqrt(r.numerator * r.denominator) // r.denominator if r.denominator == 1 else _isqrt_frac(r)


def _isqrt_frac(r: Fraction) -> int:
    k = math.isqrt(r.numerator // r.denominator)
    while (k + 1) * (k + 1) <= r:
        k += 1
    while k * k > r:
        k -= 1
    return k


def integer_range(c: Fraction, r: Fraction) -> tuple[int, int]:
    """Integers z with (z - c)^2 <= r, as an inclusive (lo, hi); lo > hi if none."""
    if r < 0:
        return (1, 0)
    s = _isqrt_frac(r) + 1  # s > sqrt(r)
    fc = math.floor(c)
    hi = fc + s + 1
    while (hi - c) ** 2 > r:
        hi -= 1
        if hi < c - s:
            return (1, 0)
    lo = fc - s - 1
    while (lo - c) ** 2 > r:
        lo += 1
    return (lo, hi)


def enumerate_ellipsoid(Q: QuadraticForm, bound, center=None, decomp: LDL | None = None) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield every integer z with Q(z - center) <= bound, together with that value."""
    n = Q.n
    D = decomp or ldl(Q)
    q, mu = D.q, D.mu
    x0 = tuple(frac(x) for x in center) if center is not None else (Fraction(0),) * n
    bound = frac(bound)
    z = [0] * n
    y = [Fraction(0)] * n

    def rec(i: int, remaining: Fraction, acc: Fraction):
        s = -x0[i]
        row = mu[i]
        for j in range(i + 1, n):
            if row[j]:
                s += row[j] * y[j]
        # need q_i (z_i + s)^2 <= remaining  ->  (z_i - (-s))^2 <= remaining / q_i
        lo, hi = integer_range(-s, remaining / q[i])
        for zi in range(lo, hi + 1):
            t = zi + s
            val = q[i] * t * t
            if val > remaining:
                continue
            z[i] = zi
            y[i] = zi - x0[i]
            if i == 0:
                yield tuple(z), acc + val
            else:
                yield from rec(i - 1, remaining - val, acc + val)

    if bound < 0:
        return
    yield from rec(n - 1, bound, Fraction(0))


def short_vectors(Q: QuadraticForm, bound) -> list[tuple[tuple[int, ...], Fraction]]:
    """Nonzero integer vectors with Q(z) <= bound, sorted by value then lexicographically."""
    out = [(z, v) for z, v in enumerate_ellipsoid(Q, bound) if any(z)]
    out.sort(key=lambda zv: (zv[1], zv[0]))
    return out


# ---------------------------------------------------------------------------
# minima, perfection, eutaxy


@dataclass(frozen=True)
class MinimaReport:
    min_value: Fraction
    minimal_vectors: frozenset
    second_min: Fraction
    long_vectors: frozenset

    def sorted_minimal(self) -> list:
        return sorted(self.minimal_vectors)

    def sorted_long(self) -> list:
        return sorted(self.long_vectors)


def minima(Q: QuadraticForm) -> MinimaReport:
    D = ldl(Q)
    bound = min(Q.gram.rows[i][i] for i in range(Q.n))
    vecs = [(z, v) for z, v in enumerate_ellipsoid(Q, bound, decomp=D) if any(z)]
    m = min(v for _, v in vecs)
    bound = 2 * m
    while True:
        vecs = [(z, v) for z, v in enumerate_ellipsoid(Q, bound, decomp=D) if any(z)]
        above = [v for _, v in vecs if v > m]
        if above:
            break
        bound *= 2
    m2 = min(above)
    return MinimaReport(
        m,
        frozenset(z for z, v in vecs if v == m),
        m2,
        frozenset(z for z, v in vecs if v == m2),
    )


def oriented(vectors: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """One representative per +-pair: the one whose first nonzero entry is positive."""
    out = set()
    for v in vectors:
        v = tuple(v)
        lead = next(x for x in v if x != 0)
        out.add(v if lead > 0 else tuple(-x for x in v))
    return sorted(out)


def _sym_coords(v) -> tuple:
    n = len(v)
    return tuple(v[i] * v[j] for i in range(n) for j in range(i, n))


def _sym_coords_matrix(M: RationalMatrix) -> tuple:
    n = M.shape[0]
    return tuple(M.rows[i][j] for i in range(n) for j in range(i, n))


@dataclass(frozen=True)
class PerfectionCertificate:
    perfect: bool
    rank: int
    dimension: int

    def __bool__(self):
        return self.perfect


def perfection_rank(vectors: Iterable[Sequence[int]]) -> int:
    rows = [_sym_coords(v) for v in oriented(vectors)]
    return rank(rows) if rows else 0


def is_perfect(Q: QuadraticForm) -> PerfectionCertificate:
    mins = minima(Q).minimal_vectors
    n = Q.n
    N = n * (n + 1) // 2
    r = perfection_rank(mins)
    return PerfectionCertificate(r == N, r, N)


def _decompose(target: RationalMatrix, vectors: list, maximize_min: bool):
    """LP: sum_v w_v v v^T = target with w >= 0 (optionally maximizing min w)."""
    cols = [_sym_coords(v) for v in vectors]
    rhs = _sym_coords_matrix(target)
    k = len(vectors)
    A_eq = [[cols[j][i] for j in range(k)] + ([0] if maximize_min else []) for i in range(len(rhs))]
    if maximize_min:
        c = [0] * k + [1]
        A_ub = [[(-1 if j == i else 0) for j in range(k)] + [1] for i in range(k)]
        b_ub = [0] * k
    else:
        c = [0] * k
        A_ub, b_ub = [], []
    opt, x = linprog_max(c, A_ub, b_ub, A_eq, rhs)
    return opt, x[:k]


@dataclass(frozen=True)
class EutaxyCertificate:
    weights: dict  # oriented minimal vector -> Fraction

    def reassemble(self) -> RationalMatrix:
        n = len(next(iter(self.weights)))
        acc = [[Fraction(0)] * n for _ in range(n)]
        for v, w in self.weights.items():
            for i in range(n):
                for j in range(n):
                    acc[i][j] += w * v[i] * v[j]
        return RationalMatrix(tuple(map(tuple, acc)))

    def is_uniform(self) -> bool:
        return len(set(self.weights.values())) == 1


def eutaxy(Q: QuadraticForm) -> EutaxyCertificate:
    """Strictly positive weights with dual(Q) = sum w_v (v.x)^2 over minimal vectors.

    The weights maximize the smallest weight, which makes them unique whenever
    the uniform choice is feasible.
    """
    target = dual(Q).gram
    vecs = oriented(minima(Q).minimal_vectors)
    try:
        opt, w = _decompose(target, vecs, maximize_min=True)
    except Infeasible:
        raise NotEutactic("dual form is not a nonnegative combination of minimal rank-one forms")
    if opt <= 0:
        raise NotEutactic("no strictly positive eutaxy weights exist")
    return EutaxyCertificate(dict(zip(vecs, w)))


def perfect_cone_membership(phi: QuadraticForm, perfect_vectors: Iterable[Sequence[int]]) -> dict:
    """Nonnegative weights w_v with sum w_v v v^T = gram(phi), or :class:`NotMember`.

    Among all decompositions the one maximizing the smallest weight is returned,
    so a form on the central ray gets its uniform weights.
    """
    vecs = oriented(perfect_vectors)
    try:
        _, w = _decompose(phi.gram, vecs, maximize_min=True)
    except Infeasible:
        raise NotMember("form is outside the perfect cone")
    return dict(zip(vecs, w))


def in_perfect_cone(phi: QuadraticForm, perfect_vectors) -> bool:
    try:
        perfect_cone_membership(phi, perfect_vectors)
    except NotMember:
        return False
    return True


# ---------------------------------------------------------------------------
# form files


def parse_form(text: str) -> QuadraticForm:
    """Parse ``n`` followed by ``n`` rows of ``n`` rationals."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty form file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"bad dimension line {lines[0]!r}")
    if n <= 0 or len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise ParseError(f"row {ln!r} does not have {n} entries")
        try:
            rows.append(tuple(Fraction(t) for t in toks))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational in row {ln!r}")
    M = RationalMatrix(tuple(rows))
    if not M.is_symmetric():
        raise ParseError("matrix is not symmetric")
    return QuadraticForm(M)


def format_form(Q: QuadraticForm) -> str:
    lines = [str(Q.n)]
    for r in Q.gram.rows:
        lines.append(" ".join(f"{x.numerator}/{x.denominator}" for x in r))
    return "\n".join(lines) + "\n"
