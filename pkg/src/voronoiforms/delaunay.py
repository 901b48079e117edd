"""Delaunay tilings of Z^n with respect to a positive definite form.

A Delaunay cell is certified by an "empty quadric" ``f(x) = c + p.x + Q(x)``
that is nonnegative on Z^n and vanishes exactly on the cell's vertices.
Cells are found by pushing such a quadric: adding ``lam * h`` for an affine
``h`` that vanishes on the current zero set lowers f on the side ``h < 0``
until a new lattice point reaches zero.  Every push ends with an exhaustive
enumeration of ``{f <= 0}``, so each certificate is global.

A tiling is stored by homology class (cells equal up to a lattice translation
and the inversion x -> -x): one representative per class, its facets, and
for each facet the class and placement of the neighbouring cell.
"""
from __future__ import annotations

import hashlib
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exactgeom import (
    ExactPolytope,
    RationalMatrix,
    affine_basis,
    dot,
    frac,
    hull,
    independent_subset,
    invert,
    nullspace,
    primitive,
    rank,
    solve,
    solve_consistent,
)
from .exactgeom import lcm_denominator
from .qform import LDL, QuadraticForm, enumerate_ellipsoid, integer_range, ldl, minima


class NotDelaunay(ValueError):
    pass


class DegenerateVertexSet(ValueError):
    pass


class WindowOverflow(RuntimeError):
    pass


class RankDeficient(ValueError):
    pass


Point = tuple  # integer tuple


def _neg(v):
    return tuple(-x for x in v)


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# quadric machinery


class FormContext:
    """Cached decompositions of a form used by every enumeration.

    ``nonpositive`` scans the integer box circumscribing the ellipsoid
    ``{f <= 0}`` (exact per-axis bounds from the inverse Gram matrix) and
    evaluates the scaled integer quadric on it with numpy int64, falling back
    to exact recursive enumeration if the box is large or values could overflow.
    """

    BOX_LIMIT = 3_000_000

    def __init__(self, Q: QuadraticForm, window_cap=None):
        self.Q = Q
        self.n = Q.n
        self.ldl: LDL = ldl(Q)
        self.inv = invert(Q.gram)
        self.rows = Q.gram.rows
        self.window_cap = None if window_cap is None else frac(window_cap)
        self.enumerations = 0
        self.dq = lcm_denominator(Q.gram.entries)
        self.qint = np.array([[int(x * self.dq) for x in r] for r in Q.gram.rows], dtype=np.int64)
        self.qabs = [[abs(int(x * self.dq)) for x in r] for r in Q.gram.rows]

    def value(self, z) -> Fraction:
        return dot(z, self.Q.gram @ tuple(z))

    def f(self, cert, z) -> Fraction:
        c, p = cert
        return c + dot(p, z) + self.value(z)

    def nonpositive(self, cert) -> list[tuple[Point, Fraction]]:
        """All integer z with f(z) <= 0, with the values f(z)."""
        c, p = cert
        # f(z) = Q(z - x0) - r with x0 = -Q^-1 p / 2, r = Q(x0) - c
        x0 = tuple(-x / 2 for x in (self.inv @ tuple(p)))
        r = self.value(x0) - c
        if self.window_cap is not None and r > self.window_cap:
            raise WindowOverflow(f"enumeration radius {r} exceeds the window cap {self.window_cap}")
        self.enumerations += 1
        if r < 0:
            return []
        ranges = [integer_range(x0[i], r * self.inv.rows[i][i]) for i in range(self.n)]
        if any(lo > hi for lo, hi in ranges):
            return []
        size = 1
        for lo, hi in ranges:
            size *= hi - lo + 1
        D = lcm_denominator([c, *p, Fraction(1, self.dq)])
        ci = int(c * D)
        pi = [int(x * D) for x in p]
        k = D // self.dq
        M = [max(abs(lo), abs(hi)) for lo, hi in ranges]
        bound = abs(ci) + sum(abs(a) * m for a, m in zip(pi, M)) + k * sum(
            self.qabs[i][j] * M[i] * M[j] for i in range(self.n) for j in range(self.n))
        if size > self.BOX_LIMIT or bound >= 2 ** 62:
            return [(z, v - r) for z, v in enumerate_ellipsoid(self.Q, r, center=x0, decomp=self.ldl)]
        axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in ranges]
        out = []
        pvec = np.array(pi, dtype=np.int64)
        # iterate over the first coordinate to bound memory
        rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, self.n - 1) if self.n > 1 else np.zeros((1, 0), dtype=np.int64)
        for z0 in axes[0]:
            Z = np.empty((len(rest), self.n), dtype=np.int64)
            Z[:, 0] = z0
            Z[:, 1:] = rest
            vals = ci + Z @ pvec + k * np.einsum("ij,jk,ik->i", Z, self.qint, Z)
            sel = np.flatnonzero(vals <= 0)
            for idx in sel:
                out.append((tuple(int(x) for x in Z[idx]), Fraction(int(vals[idx]), D)))
        out.sort()
        return out

    def push(self, cert, h, candidates: Iterable[Point]):
        """Lower f by lam*h (h = (h0, hvec), affine) until a new lattice zero appears.

        Requires f >= 0 on Z^n.  Returns (new certificate, zero set).
        """
        c, p = cert
        h0, hv = h
        lam = None
        for z in candidates:
            hz = h0 + dot(hv, z)
            if hz < 0:
                r = self.f(cert, z) / (-hz)
                if lam is None or r < lam:
                    lam = r
        if lam is None:
            raise ValueError("no candidate point on the negative side of h")
        while True:
            new = (c + lam * h0, tuple(pi + lam * hi for pi, hi in zip(p, hv)))
            pts = self.nonpositive(new)
            neg = [(z, v) for z, v in pts if v < 0]
            if not neg:
                return new, frozenset(z for z, v in pts if v == 0)
            # f_lam = f + lam*h, so f/(-h) = lam + f_lam/(-h)
            lam = min(lam + v / (-(h0 + dot(hv, z))) for z, v in neg)


def certificate_from_vertices(Q: QuadraticForm, vertices: Sequence[Point]):
    """Solve c + p.v = -Q(v) on the vertices; returns (c, p) or raises."""
    verts = [tuple(v) for v in vertices]
    n = Q.n
    rows = [(1,) + v for v in verts]
    rhs = [-dot(v, Q.gram @ v) for v in verts]
    if rank(rows) < n + 1:
        raise DegenerateVertexSet("vertices do not affinely span the space")
    sol = solve_consistent(rows, rhs)
    if sol is None:
        raise NotDelaunay("vertices do not lie on a common quadric of this form")
    x, _ = sol
    return (x[0], tuple(x[1:]))


def transform_certificate(ctx: FormContext, cert, s: int, z: Point):
    """Certificate of the cell s*X + z from that of X."""
    c, p = cert
    Qz = ctx.Q.gram @ tuple(z)
    c2 = c - s * dot(p, z) + dot(z, Qz)
    p2 = tuple(s * pi - 2 * qi for pi, qi in zip(p, Qz))
    return (c2, p2)


@dataclass(frozen=True)
class DelaunayCell:
    vertices: tuple  # sorted integer points
    certificate: tuple  # (c, p)
    dim: int

    def contains_vertex(self, v) -> bool:
        return tuple(v) in set(self.vertices)

    @cached_property
    def polytope(self) -> ExactPolytope:
        return hull(self.vertices)

    def f(self, Q: QuadraticForm, x) -> Fraction:
        c, p = self.certificate
        return c + dot(p, x) + dot(x, Q.gram @ tuple(x))


def certify_cell(Q: QuadraticForm, vertices: Iterable[Sequence[int]]) -> DelaunayCell:
    """Certificate (c, p) for a full-dimensional vertex set, checked globally."""
    verts = tuple(sorted(set(tuple(int(x) for x in v) for v in vertices)))
    cert = certificate_from_vertices(Q, verts)
    ctx = FormContext(Q)
    pts = ctx.nonpositive(cert)
    if any(v < 0 for _, v in pts):
        raise NotDelaunay("the circumscribed quadric contains lattice points inside")
    zeros = tuple(sorted(z for z, v in pts if v == 0))
    if zeros != verts:
        raise NotDelaunay("further lattice points lie on the circumscribed quadric")
    return DelaunayCell(verts, cert, Q.n)


def verify_certificate(Q: QuadraticForm, cell: DelaunayCell) -> bool:
    """Independent check: min of f over Z^n is 0 and attained exactly on the vertices."""
    c, p = cell.certificate
    for v in cell.vertices:
        if cell.f(Q, v) != 0:
            return False
    # f(x) = Q(x - x0) - r with 2 Q x0 = -p; enumerate {Q(x - x0) <= r} by Fincke-Pohst,
    # a different code path from the box scan used to build cells
    x0 = solve(Q.gram.scale(2), [-a for a in p])
    r = -cell.f(Q, x0)
    pts = sorted(z for z, val in enumerate_ellipsoid(Q, r, center=x0))
    return pts == sorted(cell.vertices) and all(cell.f(Q, z) == 0 for z in pts)


# ---------------------------------------------------------------------------
# homology classes


def canonical_form(vertices: Iterable[Point]):
    """(key, s, z) with vertices = s * key + z, key lex-least over C and -C
    translated so that its lex-least vertex is the origin."""
    V = list(vertices)
    best = None
    for s in (1, -1):
        W = sorted(V) if s == 1 else sorted(_neg(v) for v in V)
        t = W[0]
        enc = tuple(_sub(w, t) for w in W)
        if best is None or enc < best[0]:
            best = (enc, s, t)
    enc, s, t = best
    # V = s * (enc + t) = s*enc + s*t
    return enc, s, tuple(s * x for x in t)


def place(vertices: Iterable[Point], s: int, z: Point) -> tuple:
    return tuple(sorted(_add(tuple(s * x for x in v), z) for v in vertices))


@dataclass
class CellClass:
    rep: tuple  # canonical vertex tuple, lex-least vertex at the origin
    certificate: tuple
    polytope: ExactPolytope
    facet_vertices: list  # frozensets, aligned with polytope.inequalities
    neighbours: list  # (class index, sign, translation) or None

    @property
    def n_vertices(self) -> int:
        return len(self.rep)

    @cached_property
    def is_symmetric(self) -> bool:
        """Centrally symmetric (so C and -C are translates)."""
        return _is_translate(self.rep, [_neg(v) for v in self.rep])


def _is_translate(A, B) -> bool:
    A = sorted(A)
    B = sorted(B)
    t = _sub(B[0], A[0])
    return [tuple(_add(a, t)) for a in A] == B


class Tiling:
    """Delaunay tiling of Z^n for a form, organised by homology class."""

    def __init__(self, Q: QuadraticForm, window_cap=None, max_classes: int = 100000):
        self.Q = Q
        self.n = Q.n
        self.ctx = FormContext(Q, window_cap)
        self.classes: list[CellClass] = []
        self.index: dict = {}
        self._build(max_classes)

    # -- construction ------------------------------------------------------
    def _first_cell(self):
        n = self.n
        ctx = self.ctx
        cert = (Fraction(0), (Fraction(0),) * n)
        zeros = frozenset({(0,) * n})
        shorts = [z for z in minima(self.Q).minimal_vectors]
        unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        cands = shorts + unit + [_neg(u) for u in unit]
        while True:
            pts = sorted(zeros)
            basis = independent_subset([p for p in pts if any(p)])
            if len(basis) == n:
                return cert, zeros
            span_vecs = [[p for p in pts if any(p)][i] for i in basis]
            comp = nullspace(span_vecs, n)
            u = primitive(comp[0])
            # h(x) = -u.x vanishes on the span; push towards u.x > 0
            h = (0, tuple(-x for x in u))
            cs = [z for z in cands if dot(u, z) != 0]
            cs = [z if dot(u, z) > 0 else _neg(z) for z in cs]
            cert, zeros = ctx.push(cert, h, cs)

    def _add_class(self, vertices, cert) -> tuple[int, int, Point]:
        key, s, z = canonical_form(vertices)
        idx = self.index.get(key)
        if idx is None:
            # vertices = s*key + z  ->  key = s*(vertices - z) = s*vertices - s*z
            kcert = transform_certificate(self.ctx, cert, s, tuple(-s * x for x in z))
            P = hull(key)
            if P.affine_dim != self.n:
                raise DegenerateVertexSet("cell is not full-dimensional")
            fverts = P.facet_vertices()
            idx = len(self.classes)
            self.classes.append(CellClass(key, kcert, P, fverts, [None] * len(fverts)))
            self.index[key] = idx
            self._facet_lookup.append({fv: i for i, fv in enumerate(fverts)})
        return idx, s, z

    def _build(self, max_classes: int):
        self._facet_lookup: list[dict] = []
        cert, zeros = self._first_cell()
        self._add_class(zeros, cert)
        queue = deque([0])
        while queue:
            ci = queue.popleft()
            C = self.classes[ci]
            for fi, (a, b) in enumerate(C.polytope.inequalities):
                if C.neighbours[fi] is not None:
                    continue
                F = C.facet_vertices[fi]
                others = [v for v in C.rep if v not in F]
                cands = [_sub(tuple(2 * x for x in f), w) for f in F for w in others]
                h = (b, tuple(-x for x in a))  # h = b - a.x
                ncert, W = self.ctx.push(C.certificate, h, cands)
                bi, s, z = self._add_class(W, ncert)
                if len(self.classes) > max_classes:
                    raise WindowOverflow("too many homology classes")
                C.neighbours[fi] = (bi, s, z)
                if bi == len(self.classes) - 1 and bi not in queue and bi != ci:
                    queue.append(bi)
                # the reverse adjacency: in the frame of class bi, C appears as s*(C - z)
                B = self.classes[bi]
                Fb = frozenset(tuple(s * x for x in _sub(v, z)) for v in F)
                fj = self._facet_lookup[bi].get(Fb)
                if fj is not None and B.neighbours[fj] is None:
                    B.neighbours[fj] = (ci, s, tuple(-s * x for x in z))
        for C in self.classes:
            assert all(nb is not None for nb in C.neighbours)

    # -- derived data ------------------------------------------------------
    def place_class(self, ci: int, s: int, z: Point) -> tuple:
        return place(self.classes[ci].rep, s, z)

    def cell(self, ci: int, s: int, z: Point) -> DelaunayCell:
        C = self.classes[ci]
        return DelaunayCell(place(C.rep, s, z), transform_certificate(self.ctx, C.certificate, s, z), self.n)

    def facets_of(self, ci: int, s: int, z: Point) -> list:
        """Facet inequalities (a, b), a.x <= b, of the cell s*rep + z."""
        out = []
        for a, b in self.classes[ci].polytope.inequalities:
            sa = tuple(s * x for x in a)
            out.append((sa, b + dot(sa, z)))
        return out

    def neighbour(self, ci: int, s: int, z: Point, fi: int) -> tuple:
        bi, s2, z2 = self.classes[ci].neighbours[fi]
        return bi, s * s2, _add(tuple(s * x for x in z2), z)

    def star_placements(self) -> list[tuple[int, int, Point]]:
        """(class, sign, translation) of every cell containing the origin."""
        seen = set()
        out = []
        for ci, C in enumerate(self.classes):
            for s in (1, -1):
                for v in C.rep:
                    z = tuple(-s * x for x in v)
                    key = self.place_class(ci, s, z)
                    if key not in seen:
                        seen.add(key)
                        out.append((ci, s, z))
        out.sort(key=lambda t: self.place_class(*t))
        return out

    def star(self) -> "Star":
        cells = []
        adjacency = []
        places = self.star_placements()
        where = {self.place_class(*pl): i for i, pl in enumerate(places)}
        for i, pl in enumerate(places):
            cells.append(self.cell(*pl))
        for i, (ci, s, z) in enumerate(places):
            for fi in range(len(self.classes[ci].neighbours)):
                nb = self.neighbour(ci, s, z, fi)
                j = where.get(self.place_class(*nb))
                if j is not None and i < j:
                    adjacency.append((i, j))
        return Star(self.Q, tuple(cells), tuple(sorted(adjacency)), tuple(pl[0] for pl in places), self)

    def fingerprint(self) -> tuple:
        return tuple(sorted(C.rep for C in self.classes))

    def digest(self) -> str:
        return hashlib.sha256(repr(self.fingerprint()).encode()).hexdigest()[:16]

    # -- point location ----------------------------------------------------
    def locate(self, x, start: tuple | None = None, max_steps: int = 10000) -> tuple[int, int, Point]:
        """A cell (class, sign, translation) containing the rational point x."""
        x = tuple(frac(v) for v in x)
        if start is None:
            ci, s, z = self.star_placements()[0]
            shift = tuple(round(v) for v in x)
            start = (ci, s, _add(z, shift))
        cur = start
        for _ in range(max_steps):
            worst = None
            for fi, (a, b) in enumerate(self.facets_of(*cur)):
                viol = dot(a, x) - b
                if viol > 0:
                    if worst is None or viol > worst[0]:
                        worst = (viol, fi)
            if worst is None:
                return cur
            cur = self.neighbour(*cur, worst[1])
        raise RuntimeError("point location did not terminate")

    def census(self) -> dict:
        """Class count by combinatorial type (vertex count, f-vector)."""
        out = Counter()
        for C in self.classes:
            out[(C.n_vertices, face_vector(C.polytope))] += 1
        return dict(out)


def build_tiling(Q: QuadraticForm, window_cap=None) -> Tiling:
    return Tiling(Q, window_cap)


# ---------------------------------------------------------------------------
# stars


@dataclass
class Star:
    form: QuadraticForm
    cells: tuple
    adjacency: tuple
    class_of: tuple
    tiling: Tiling | None = None

    def __len__(self) -> int:
        return len(self.cells)

    def vertex_counts(self) -> Counter:
        return Counter(len(c.vertices) for c in self.cells)

    def faces_at_origin(self) -> dict:
        """Faces of star cells that contain the origin, grouped by dimension."""
        origin = (0,) * self.form.n
        out: dict = {}
        for c in self.cells:
            for d, fs in faces(c.polytope).items():
                for f in fs:
                    if origin in f:
                        out.setdefault(d, set()).add(f)
        return {d: len(v) for d, v in sorted(out.items())}


@dataclass(frozen=True)
class HomologyClass:
    representative: DelaunayCell
    members: tuple


def star_at_origin(Q: QuadraticForm, window_cap=None) -> Star:
    return build_tiling(Q, window_cap).star()


def homology_classes(star: Star) -> list[HomologyClass]:
    groups: dict = {}
    for cell in star.cells:
        key, _, _ = canonical_form(cell.vertices)
        groups.setdefault(key, []).append(cell)
    out = []
    for key in sorted(groups):
        members = tuple(sorted(groups[key], key=lambda c: c.vertices))
        out.append(HomologyClass(members[0], members))
    return out


# ---------------------------------------------------------------------------
# faces, layers, incidences, sections


def faces(P: ExactPolytope) -> dict:
    """All proper nonempty faces (as vertex frozensets) grouped by dimension."""
    facets = [fv for fv in P.facet_vertices()]
    found = set(facets)
    frontier = set(facets)
    while frontier:
        nxt = set()
        for A in frontier:
            for B in facets:
                C = A & B
                if C and C != A and C not in found:
                    found.add(C)
                    nxt.add(C)
        frontier = nxt
    out: dict = {}
    for f in found:
        pts = sorted(f)
        d = len(affine_basis(pts)) - 1
        out.setdefault(d, set()).add(f)
    return {d: sorted(v, key=sorted) for d, v in sorted(out.items())}


def face_vector(P: ExactPolytope) -> tuple:
    fs = faces(P)
    return tuple(len(fs.get(d, ())) for d in range(P.affine_dim))


def layers(cell: DelaunayCell, Q: QuadraticForm) -> tuple[frozenset, frozenset]:
    rep = minima(Q)
    short = frozenset(v for v in cell.vertices if Q(v) == rep.min_value)
    long = frozenset(v for v in cell.vertices if Q(v) == rep.second_min)
    return short, long


def perfect_vector_of_cell(cell: DelaunayCell, perfect_vectors: Iterable[Sequence[int]], Q: QuadraticForm | None = None) -> frozenset:
    """Perfect vectors p with p.s = 1 on the short layer and p.l = 2 on the long layer.

    Without a form the layers are unknown, so p only has to pair to 1 or 2 with
    every nonzero vertex.
    """
    verts = [v for v in cell.vertices if any(v)]
    out = set()
    if Q is not None:
        short, long = layers(cell, Q)
        for p in perfect_vectors:
            if all(dot(p, s) == 1 for s in short) and all(dot(p, l) == 2 for l in long) and (short or long):
                out.add(tuple(p))
        return frozenset(out)
    for p in perfect_vectors:
        if all(dot(p, v) in (1, 2) for v in verts):
            out.add(tuple(p))
    return frozenset(out)


def sublattice_section(Q: QuadraticForm, orthogonal_to: Iterable[Sequence[int]]):
    """Integral basis of Z^n n S^perp and the restricted Gram matrix."""
    S = [tuple(v) for v in orthogonal_to]
    n = Q.n
    rows = [S[i] for i in independent_subset(S)] if S else []
    ns = nullspace(rows, n) if rows else nullspace([], n)
    k = len(ns)
    if k == 0:
        raise RankDeficient("orthogonal complement is trivial")
    basis = saturate([primitive(v) for v in ns])
    B = RationalMatrix(tuple(basis))
    G = B @ Q.gram @ B.T
    return basis, QuadraticForm(G)


def saturate(vectors: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Integral basis of (span of vectors) n Z^n."""
    n = len(vectors[0])
    comp = [primitive(v) for v in nullspace([list(v) for v in vectors], n)]
    if not comp:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return _integer_kernel(comp)


def _integer_kernel(C) -> list[tuple[int, ...]]:
    """Basis of {x in Z^n : C x = 0} by unimodular column reduction."""
    m, n = len(C), len(C[0])
    A = [list(map(int, r)) for r in C]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # columns track operations
    col = 0
    for r in range(m):
        # gcd-reduce row r over columns col..n-1
        while True:
            nz = [j for j in range(col, n) if A[r][j] != 0]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(A[r][j]))
            for j in nz:
                if j != j0:
                    q = A[r][j] // A[r][j0]
                    for i in range(m):
                        A[i][j] -= q * A[i][j0]
                    for i in range(n):
                        U[i][j] -= q * U[i][j0]
        nz = [j for j in range(col, n) if A[r][j] != 0]
        if nz:
            j = nz[0]
            for i in range(m):
                A[i][col], A[i][j] = A[i][j], A[i][col]
            for i in range(n):
                U[i][col], U[i][j] = U[i][j], U[i][col]
            col += 1
    return [tuple(U[i][j] for i in range(n)) for j in range(col, n)]
