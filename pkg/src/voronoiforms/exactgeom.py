"""Exact rational linear algebra and small-dimensional polytopes.

Everything here works over :class:`fractions.Fraction` or Python integers.
Polytopes are kept in both representations (vertices and irredundant facet
inequalities); vertex and facet enumeration use the double description method
on integer cones.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of int or Fraction


class SingularMatrix(ValueError):
    pass


class Unbounded(ValueError):
    pass


class Infeasible(ValueError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def as_int_if_possible(x):
    x = frac(x)
    return x.numerator if x.denominator == 1 else x


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def lcm_denominator(values: Iterable) -> int:
    d = 1
    for x in values:
        x = frac(x)
        d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    d = lcm_denominator(v)
    w = [int(frac(x) * d) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def is_integral(v: Sequence) -> bool:
    return all(frac(x).denominator == 1 for x in v)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RationalMatrix:
    """Dense rational matrix stored row-major as nested tuples of Fractions."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(frac(x) for x in r) for r in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "RationalMatrix":
        return cls(tuple((0,) * c for _ in range(r)))

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            cols = list(zip(*other.rows))
            if self.shape[1] != other.shape[0]:
                raise ValueError("shape mismatch")
            return RationalMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))
        # vector
        return tuple(dot(r, other) for r in self.rows)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return RationalMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> "RationalMatrix":
        c = frac(c)
        return RationalMatrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_int_rows(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_integral():
            raise ValueError("matrix is not integral")
        return tuple(tuple(int(x) for x in r) for r in self.rows)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def det(self) -> Fraction:
        return determinant(self.rows)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def matrix(rows) -> RationalMatrix:
    return rows if isinstance(rows, RationalMatrix) else RationalMatrix(tuple(tuple(r) for r in rows))


def _echelon(rows, ncols):
    """Row echelon form over the rationals. Returns (reduced rows, pivot columns)."""
    a = [[frac(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(M) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    rows = M.rows if isinstance(M, RationalMatrix) else M
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    d = lcm_denominator(x for r in rows for x in r)
    a = [[int(frac(x) * d) for x in r] for r in rows]
    nr, nc = len(a), len(a[0])
    rk = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(rk, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        for i in range(rk + 1, nr):
            for j in range(c + 1, nc):
                a[i][j] = (a[i][j] * a[rk][c] - a[i][c] * a[rk][j]) // prev
            a[i][c] = 0
        prev = a[rk][c]
        rk += 1
        if rk == nr:
            break
    return rk


def determinant(rows) -> Fraction:
    a = [[frac(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def invert(M) -> RationalMatrix:
    """Exact inverse; raises :class:`SingularMatrix`."""
    M = matrix(M)
    n, m = M.shape
    if n != m:
        raise SingularMatrix("matrix is not square")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    red, piv = _echelon(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrix("matrix is singular")
    return RationalMatrix(tuple(tuple(r[n:]) for r in red))


def solve(A, b) -> tuple:
    """Unique solution of the square system A x = b."""
    Ainv = invert(A)
    return Ainv @ tuple(frac(x) for x in b)


def solve_consistent(A_rows, b):
    """Some solution of A x = b (any consistent system), or None if inconsistent.

    Returns (particular solution, nullspace basis).
    """
    ncols = len(A_rows[0])
    aug = [list(r) + [frac(bi)] for r, bi in zip(A_rows, b)]
    red, piv = _echelon(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for r, c in zip(red, piv):
        x[c] = r[ncols]
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, c in zip(red, piv):
            v[c] = -r[fc]
        basis.append(tuple(v))
    return tuple(x), basis


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of {x : r.x = 0 for r in rows}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    return solve_consistent(list(rows), [0] * len(rows))[1]


def independent_subset(vectors: Sequence[Sequence], limit: int | None = None) -> list[int]:
    """Indices of a greedily chosen linearly independent subset."""
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivcols: list[int] = []
    for idx, v in enumerate(vectors):
        w = [frac(x) for x in v]
        for b, c in zip(basis, pivcols):
            if w[c] != 0:
                f = w[c]
                w = [x - f * y for x, y in zip(w, b)]
        c = next((j for j, x in enumerate(w) if x != 0), None)
        if c is None:
            continue
        inv = 1 / w[c]
        w = [x * inv for x in w]
        # keep basis reduced on the new pivot column
        basis = [[x - bb[c] * y for x, y in zip(bb, w)] for bb in basis]
        basis.append(w)
        pivcols.append(c)
        chosen.append(idx)
        if limit is not None and len(chosen) == limit:
            break
    return chosen


def affine_basis(points: Sequence[Sequence]) -> list[int]:
    """Indices of an affinely independent subset spanning the affine hull."""
    if not points:
        return []
    p0 = points[0]
    diffs = [vsub(p, p0) for p in points[1:]]
    return [0] + [i + 1 for i in independent_subset(diffs)]


def affine_dependency(points: Sequence[Sequence]) -> tuple:
    """A nonzero (lambda_i) with sum lambda_i = 0 and sum lambda_i p_i = 0.

    Requires a one-dimensional dependency space (n+2 points spanning R^n,
    or generally a single circuit).
    """
    k = len(points)
    n = len(points[0])
    rows = [[frac(p[j]) for p in points] for j in range(n)] + [[Fraction(1)] * k]
    ns = nullspace(rows, k)
    if len(ns) != 1:
        raise ValueError(f"expected a unique affine dependency, got {len(ns)}")
    lam = primitive(ns[0])
    return lam


# ---------------------------------------------------------------------------
# double description


def _int_rows(rows) -> list[tuple[int, ...]]:
    out = []
    for r in rows:
        out.append(primitive(r) if any(frac(x) != 0 for x in r) else tuple(0 for _ in r))
    return out


def extreme_rays(rows: Sequence[Sequence], dim: int) -> list[tuple[tuple[int, ...], frozenset[int]]]:
    """Extreme rays of the pointed cone ``{x in R^dim : r.x >= 0}``.

    Returns ``(ray, tight)`` pairs where ``tight`` is the set of row indices
    the ray satisfies with equality.  Rows must have full rank ``dim``.
    """
    A = _int_rows(rows)
    A = [r for r in A]
    start = independent_subset(A, dim)
    if len(start) < dim:
        raise ValueError("cone is not pointed (rows do not have full rank)")
    B = RationalMatrix(tuple(A[i] for i in start))
    Binv = invert(B)
    rays: list[tuple[int, ...]] = []
    zero: list[int] = []
    for j in range(dim):
        col = tuple(Binv.rows[i][j] for i in range(dim))
        rays.append(primitive(col))
        zero.append(sum(1 << start[i] for i in range(dim) if i != j))
    done = 0
    for i in start:
        done |= 1 << i
    order = [i for i in range(len(A)) if i not in set(start)]
    for i in order:
        a = A[i]
        bit = 1 << i
        vals = [dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = []
        new_zero = []
        if pos and neg:
            for p in pos:
                zp = zero[p]
                for q in neg:
                    common = zp & zero[q]
                    if common.bit_count() < dim - 2:
                        continue
                    adjacent = True
                    for k in range(len(rays)):
                        if k != p and k != q and (common & ~zero[k]) == 0:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    r = tuple(vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q]))
                    new_rays.append(primitive(r))
                    new_zero.append(common | bit)
        keep = pos + zer
        rays = [rays[k] for k in keep] + new_rays
        zero = [zero[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zero
        done |= bit
    out = []
    for r, z in zip(rays, zero):
        tight = frozenset(k for k in range(len(A)) if (z >> k) & 1)
        # rows that were exactly duplicates of processed ones may need a recheck
        tight = frozenset(k for k in range(len(A)) if dot(A[k], r) == 0)
        out.append((r, tight))
    return out


# ---------------------------------------------------------------------------
# polytopes


Halfspace = tuple  # (normal: tuple[int], offset: int)  meaning normal.x <= offset


def _normalize_halfspace(normal, offset) -> Halfspace:
    v = primitive(tuple(normal) + (offset,))
    return (v[:-1], v[-1])


def _normalize_equation(normal, offset) -> Halfspace:
    n, o = _normalize_halfspace(normal, offset)
    # fix the sign: first nonzero coefficient positive
    lead = next(x for x in n if x != 0)
    if lead < 0:
        n, o = tuple(-x for x in n), -o
    return (n, o)


@dataclass(frozen=True)
class ExactPolytope:
    """Bounded polytope with rational vertices and integer facet inequalities.

    ``inequalities`` are ``(a, b)`` meaning ``a.x <= b``; ``equations`` are
    ``(a, b)`` meaning ``a.x == b`` and describe the affine hull.
    """

    dim: int
    vertices: tuple
    inequalities: tuple
    equations: tuple = ()
    affine_dim: int = -1
    rays: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, x, strict: bool = False) -> bool:
        for a, b in self.equations:
            if dot(a, x) != b:
                return False
        for a, b in self.inequalities:
            v = dot(a, x)
            if v > b or (strict and v == b):
                return False
        return True

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def facet_vertices(self) -> list[frozenset]:
        return [frozenset(v for v in self.vertices if dot(a, v) == b) for a, b in self.inequalities]

    def centroid(self) -> tuple:
        k = len(self.vertices)
        return tuple(sum((frac(v[i]) for v in self.vertices), Fraction(0)) / k for i in range(self.dim))

    def __eq__(self, other):
        if not isinstance(other, ExactPolytope):
            return NotImplemented
        return (self.dim == other.dim and set(self.vertices) == set(other.vertices))

    def __hash__(self):
        return hash((self.dim, frozenset(self.vertices)))


def _canon_point(p) -> tuple:
    return tuple(as_int_if_possible(x) for x in p)


def empty_polytope(dim: int) -> ExactPolytope:
    return ExactPolytope(dim, (), ((tuple([0] * dim), -1),), (), -1)


def hull(points: Iterable[Sequence]) -> ExactPolytope:
    """Convex hull with irredundant vertices and facets (any affine dimension)."""
    pts = sorted(set(_canon_point(p) for p in points))
    if not pts:
        raise ValueError("hull of no points")
    n = len(pts[0])
    base = pts[0]
    diffs = [vsub(p, base) for p in pts]
    ind = independent_subset(diffs)
    k = len(ind)
    # affine hull equations
    eqs = []
    for nv in nullspace([diffs[i] for i in ind], n) if k < n else []:
        a = primitive(nv)
        eqs.append(_normalize_equation(a, dot(a, base)))
    eqs = tuple(sorted(set(eqs)))
    if k == 0:
        return ExactPolytope(n, (pts[0],), (), eqs, 0)
    # coordinates on the affine hull: project onto k pivot coordinates
    _, pivots = _echelon([diffs[i] for i in ind], n)
    proj = [tuple(p[c] for c in pivots) for p in pts]
    # polar cone: (a, beta) with beta - a.y >= 0 for all y
    rows = [tuple(-frac(x) for x in y) + (Fraction(1),) for y in proj]
    ineqs = []
    for ray, _tight in extreme_rays(rows, k + 1):
        a = ray[:k]
        if all(x == 0 for x in a):
            continue
        beta = ray[k]
        normal = [0] * n
        for c, ac in zip(pivots, a):
            normal[c] = ac
        ineqs.append(_normalize_halfspace(normal, beta))
    # keep only vertices (points that are not convex combinations)
    ineqs = sorted(set(ineqs))
    verts = []
    for p in pts:
        tight = [h for h in ineqs if dot(h[0], p) == h[1]]
        if len(tight) >= k and rank([h[0] for h in tight] + [e[0] for e in eqs]) == n:
            verts.append(p)
    return ExactPolytope(n, tuple(verts), tuple(ineqs), eqs, k)


def from_halfspaces(dim: int, inequalities: Iterable, equations: Iterable = ()) -> ExactPolytope:
    """Polytope {x : a.x <= b (ineqs), a.x == b (eqs)} via vertex enumeration."""
    ineqs = [(tuple(frac(x) for x in a), frac(b)) for a, b in inequalities]
    eqs = [(tuple(frac(x) for x in a), frac(b)) for a, b in equations]
    # parametrize the affine subspace of the equations
    if eqs:
        sol = solve_consistent([a for a, _ in eqs], [b for _, b in eqs])
        if sol is None:
            return empty_polytope(dim)
        x0, basis = sol
    else:
        x0 = tuple(Fraction(0) for _ in range(dim))
        basis = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    k = len(basis)
    if k == 0:
        p = x0
        if all(dot(a, p) <= b for a, b in ineqs):
            return hull([p])
        return empty_polytope(dim)
    # in y-coordinates: a.(x0 + N y) <= b  ->  (b - a.x0) * y0 - (a.N) y >= 0 with y0 >= 0
    rows = []
    for a, b in ineqs:
        aN = tuple(dot(a, col) for col in basis)
        rows.append((b - dot(a, x0),) + tuple(-x for x in aN))
    rows.append((Fraction(1),) + tuple(Fraction(0) for _ in range(k)))
    try:
        rays = extreme_rays(rows, k + 1)
    except ValueError:
        raise Unbounded("halfspace system has a lineality space")
    verts = []
    rec = []
    for r, _ in rays:
        if r[0] > 0:
            y = [Fraction(x, r[0]) for x in r[1:]]
            verts.append(tuple(x0[i] + sum(y[j] * basis[j][i] for j in range(k)) for i in range(dim)))
        elif any(r[1:]):
            rec.append(tuple(sum(r[1 + j] * basis[j][i] for j in range(k)) for i in range(dim)))
    if rec:
        P = hull(verts) if verts else empty_polytope(dim)
        return ExactPolytope(dim, P.vertices, P.inequalities, P.equations, P.affine_dim, tuple(rec))
    if not verts:
        return empty_polytope(dim)
    return hull(verts)


def intersect(P1: ExactPolytope, P2: ExactPolytope) -> ExactPolytope:
    if P1.dim != P2.dim:
        raise ValueError("ambient dimensions differ")
    if P1.is_empty or P2.is_empty:
        return empty_polytope(P1.dim)
    return from_halfspaces(P1.dim, P1.inequalities + P2.inequalities, P1.equations + P2.equations)


def lattice_points(P: ExactPolytope) -> list[tuple[int, ...]]:
    """All integer points of a bounded polytope, sorted lexicographically."""
    if P.rays:
        raise Unbounded("polytope has a recession direction")
    if P.is_empty:
        return []
    lo = [math.ceil(min(frac(v[i]) for v in P.vertices)) for i in range(P.dim)]
    hi = [math.floor(max(frac(v[i]) for v in P.vertices)) for i in range(P.dim)]
    out = []
    for z in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if P.contains(z):
            out.append(tuple(z))
    return out


@dataclass(frozen=True)
class LowerFacet:
    """A lower facet of a lifted point set; ``height(x) = slope.x + constant``."""

    points: tuple
    slope: tuple
    constant: Fraction

    def height(self, x) -> Fraction:
        return dot(self.slope, x) + self.constant


def lower_hull(lifted_points: Iterable[Sequence]) -> list[LowerFacet]:
    """Facets of the hull whose outer normal has negative last coordinate."""
    pts = [tuple(frac(x) for x in p) for p in lifted_points]
    if len(set(pts)) != len(pts):
        raise ValueError("lifted points must be distinct")
    P = hull(pts)
    out = []
    for a, b in P.inequalities:
        if a[-1] < 0:
            on = tuple(sorted(_canon_point(p[:-1]) for p in P.vertices if dot(a, p) == b))
            # a'.x + a_last*y = b  ->  y = (b - a'.x)/a_last
            slope = tuple(Fraction(-x, a[-1]) for x in a[:-1])
            out.append(LowerFacet(on, slope, Fraction(b, a[-1])))
    out.sort(key=lambda f: f.points)
    return out


# ---------------------------------------------------------------------------
# exact linear programming (dense tableau simplex, Bland's rule)


def linprog_max(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Maximize c.x subject to A_ub x <= b_ub, A_eq x == b_eq, x >= 0.

    Returns (optimum, x).  Raises :class:`Infeasible` or :class:`Unbounded`.
    """
    c = [frac(x) for x in c]
    nv = len(c)
    rows = []
    rhs = []
    slack_rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append([frac(x) for x in a])
        rhs.append(frac(b))
        slack_rows.append(True)
    for a, b in zip(A_eq, b_eq):
        rows.append([frac(x) for x in a])
        rhs.append(frac(b))
        slack_rows.append(False)
    m = len(rows)
    nslack = sum(slack_rows)
    ncols = nv + nslack + m  # structural, slack, artificial
    T = []
    basis = []
    s = 0
    for i in range(m):
        row = rows[i] + [Fraction(0)] * (nslack + m)
        if slack_rows[i]:
            row[nv + s] = Fraction(1)
            s += 1
        sign = 1 if rhs[i] >= 0 else -1
        row = [sign * x for x in row]
        row[nv + nslack + i] = Fraction(1)
        T.append(row + [sign * rhs[i]])
        basis.append(nv + nslack + i)

    def pivot(r, col):
        inv = 1 / T[r][col]
        T[r] = [x * inv for x in T[r]]
        for i in range(len(T)):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        basis[r] = col

    def run(obj, allowed):
        # obj: list of costs over ncols (maximize)
        while True:
            # reduced costs
            cb = [obj[b] for b in basis]
            entering = None
            for j in allowed:
                if j in basis:
                    continue
                rc = obj[j] - sum(cb[i] * T[i][j] for i in range(m))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise Unbounded("linear program is unbounded")
            pivot(best[1], entering)

    # phase 1: maximize -sum(artificials)
    obj1 = [Fraction(0)] * ncols
    for i in range(m):
        obj1[nv + nslack + i] = Fraction(-1)
    run(obj1, range(ncols))
    if any(T[i][-1] != 0 for i in range(m) if basis[i] >= nv + nslack):
        raise Infeasible("linear program is infeasible")
    # drive remaining (zero-level) artificials out of the basis
    for i in range(m):
        if basis[i] >= nv + nslack:
            col = next((j for j in range(nv + nslack) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    obj2 = c + [Fraction(0)] * (nslack + m)
    run(obj2, range(nv + nslack))
    x = [Fraction(0)] * nv
    for i, b in enumerate(basis):
        if b < nv:
            x[b] = T[i][-1]
    return dot(c, x), tuple(x)


def interiors_overlap(P1: ExactPolytope, P2: ExactPolytope) -> bool:
    """Whether two full-dimensional polytopes share an interior point (exact LP)."""
    n = P1.dim
    cons = list(P1.inequalities) + list(P2.inequalities)
    # variables x = u - w (u, w >= 0) and eps in [0, 1]
    A = []
    b = []
    for a, off in cons:
        A.append(list(a) + [-x for x in a] + [1])
        b.append(off)
    A.append([0] * (2 * n) + [1])
    b.append(1)
    c = [0] * (2 * n) + [1]
    try:
        opt, _ = linprog_max(c, A, b)
    except Infeasible:
        return False
    return opt > 0
