"""Commensurability of Delaunay tilings and L-type changes along a segment.

Along ``Q_t = (1 - t) Q0 + t Q1`` a fixed tiling stays Delaunay exactly on an
interval cut out by finitely many affine functions of t:

* for a cell with more than n + 1 vertices, each affine dependency among its
  vertices must keep all of them on one quadric (the functional must vanish);
* for two cells sharing a facet, the circumscribed quadric of one must stay
  positive at the far vertex of the other (local Delaunay condition, which
  for a face-to-face tiling implies the global one).

Both are affine in t because the quadric's value at an affinely expressed
point is ``Q_t(b) - sum mu_i Q_t(v_i)``.  The scanner samples an interval,
reads off the exact open interval on which that tiling persists, and recurses
into what is left, so every breakpoint is an exact rational.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .delaunay import (
    DelaunayCell,
    NotDelaunay,
    Tiling,
    build_tiling,
    canonical_form,
)
from .exactgeom import (
    RationalMatrix,
    affine_basis,
    affine_dependency,
    frac,
    hull,
    intersect,
    is_integral,
    lattice_points,
    solve,
)
from .qform import (
    NotMember,
    QuadraticForm,
    blend,
    dual,
    evaluate,
    is_perfect,
    ldl,
    minima,
    perfect_cone_membership,
    trace_product,
)


class EmptyIntersection(ValueError):
    pass


class AffineMismatch(ValueError):
    pass


class NoCrossing(ValueError):
    pass


class IdenticallyZero(ValueError):
    pass


# ---------------------------------------------------------------------------
# refinement and commensurability


def star_vertex_sets(T: Tiling) -> list[frozenset]:
    return [frozenset(T.place_class(*pl)) for pl in T.star_placements()]


def refines(fine: Tiling, coarse: Tiling) -> bool:
    """Every cell of ``fine`` lies inside a cell of ``coarse``.

    A lattice polytope lies in a Delaunay cell iff its vertices are vertices
    of that cell, and class representatives have a vertex at the origin, so
    only cells of the coarse star need to be checked.
    """
    star = star_vertex_sets(coarse)
    for C in fine.classes:
        rep = set(C.rep)
        if not any(rep <= S for S in star):
            return False
    return True


@dataclass
class CommensurabilityVerdict:
    commensurate: bool
    witness: tuple | None = None  # (cell vertices 1, cell vertices 2, non-integral vertex)
    intersection_star: tuple | None = None  # class representatives of the common refinement


def _interior_samples(vertices) -> list[tuple]:
    k = len(vertices)
    n = len(vertices[0])
    cen = tuple(Fraction(sum(v[i] for v in vertices), k) for i in range(n))
    out = [cen]
    for v in vertices:
        out.append(tuple((3 * c + x) / 4 for c, x in zip(cen, v)))
    return out


def commensurate(Q1: QuadraticForm, Q2: QuadraticForm, tilings: tuple | None = None) -> CommensurabilityVerdict:
    """Decide whether the Delaunay tilings of Q1 and Q2 are commensurate.

    The tilings are commensurate iff the tiling of Q1 + Q2 refines both; if
    not, a non-integral vertex of some overlapping pair is searched for among
    cells meeting a non-refining cell of the sum.
    """
    ldl(Q1)
    ldl(Q2)
    T1, T2, Tm = tilings if tilings else (build_tiling(Q1), build_tiling(Q2), build_tiling(Q1 + Q2))
    if refines(Tm, T1) and refines(Tm, T2):
        return CommensurabilityVerdict(True, None, tuple(C.rep for C in Tm.classes))
    stars = (star_vertex_sets(T1), star_vertex_sets(T2))
    for C in Tm.classes:
        rep = set(C.rep)
        if all(any(rep <= S for S in st) for st in stars):
            continue
        for x in _interior_samples(C.rep):
            c1 = T1.place_class(*T1.locate(x))
            c2 = T2.place_class(*T2.locate(x))
            P = intersect(hull(c1), hull(c2))
            bad = sorted(v for v in P.vertices if not is_integral(v))
            if bad:
                return CommensurabilityVerdict(False, (c1, c2, bad[0]))
    return CommensurabilityVerdict(False, None)


@dataclass(frozen=True)
class IntermediateCell:
    """conv(C1 n C2 n Z^n) with certificates from both tilings."""

    vertices: tuple
    certificate0: tuple
    certificate1: tuple

    def certificate_at(self, t) -> tuple:
        t = frac(t)
        (c0, p0), (c1, p1) = self.certificate0, self.certificate1
        return ((1 - t) * c0 + t * c1, tuple((1 - t) * a + t * b for a, b in zip(p0, p1)))

    def cell_at(self, t, Q0: QuadraticForm, Q1: QuadraticForm) -> DelaunayCell:
        return DelaunayCell(self.vertices, self.certificate_at(t), len(self.vertices[0]))


def intermediate_cell(C1: DelaunayCell, C2: DelaunayCell) -> IntermediateCell:
    P = intersect(C1.polytope, C2.polytope)
    pts = lattice_points(P) if not P.is_empty else []
    if not pts:
        raise EmptyIntersection("cells share no lattice point")
    return IntermediateCell(tuple(sorted(pts)), C1.certificate, C2.certificate)


# ---------------------------------------------------------------------------
# functionals and crossings


@dataclass(frozen=True)
class RepartitioningFunctional:
    form: QuadraticForm
    source: tuple  # (V_G, V_Q)

    def __call__(self, phi: QuadraticForm) -> Fraction:
        return trace_product(self.form, phi)


def repartitioning_functional(V_G: Iterable[Sequence[int]], V_Q: Iterable[Sequence[int]]) -> RepartitioningFunctional:
    vg = [tuple(v) for v in V_G]
    vq = [tuple(v) for v in V_Q]
    n = len((vg or vq)[0])
    sg = tuple(sum(v[i] for v in vg) for i in range(n))
    sq = tuple(sum(v[i] for v in vq) for i in range(n))
    if len(vg) != len(vq) or sg != sq:
        raise AffineMismatch("vertex sets differ in size or in their sums; affine terms do not cancel")
    acc = [[Fraction(0)] * n for _ in range(n)]
    for sign, vs in ((1, vg), (-1, vq)):
        for v in vs:
            for i in range(n):
                for j in range(n):
                    acc[i][j] += sign * v[i] * v[j]
    return RepartitioningFunctional(QuadraticForm(RationalMatrix(tuple(map(tuple, acc)))), (tuple(vg), tuple(vq)))


def hyperplane_crossing(functional, Q0: QuadraticForm, Q1: QuadraticForm) -> Fraction:
    """t in [0, 1] with <pi, (1-t) Q0 + t Q1> = 0."""
    pi = functional.form if isinstance(functional, RepartitioningFunctional) else functional
    a = trace_product(pi, Q0)
    b = trace_product(pi, Q1)
    if a == 0 and b == 0:
        raise IdenticallyZero("the segment lies in the hyperplane")
    if a == b:
        raise NoCrossing("the functional is constant and nonzero along the segment")
    t = a / (a - b)
    if not 0 <= t <= 1:
        raise NoCrossing(f"crossing at t={t} lies outside the segment")
    return t


# ---------------------------------------------------------------------------
# walls of the tiling along a segment


@dataclass(frozen=True)
class WallFunction:
    """The affine function g(t) = (1-t) g0 + t g1 that must stay positive (or zero)."""

    g0: Fraction
    g1: Fraction
    kind: str  # "facet" (must stay > 0) or "dependency" (must stay = 0)
    cls: int

    def at(self, t) -> Fraction:
        return (1 - t) * self.g0 + t * self.g1


def _affine_coefficients(basis_pts, x) -> tuple:
    """mu with x = sum mu_i b_i and sum mu_i = 1."""
    n = len(x)
    rows = [[Fraction(1)] * len(basis_pts)] + [[Fraction(b[i]) for b in basis_pts] for i in range(n)]
    rhs = [Fraction(1)] + [Fraction(v) for v in x]
    return solve(RationalMatrix(tuple(map(tuple, rows))), rhs)


def wall_functions(T: Tiling, Q0: QuadraticForm, Q1: QuadraticForm) -> list[WallFunction]:
    out = []
    for ci, C in enumerate(T.classes):
        rep = list(C.rep)
        bidx = affine_basis(rep)
        B = [rep[i] for i in bidx]

        def g(x):
            mu = _affine_coefficients(B, x)
            g0 = evaluate(Q0, x) - sum(m * evaluate(Q0, b) for m, b in zip(mu, B))
            g1 = evaluate(Q1, x) - sum(m * evaluate(Q1, b) for m, b in zip(mu, B))
            return g0, g1

        for i, v in enumerate(rep):
            if i not in bidx:
                g0, g1 = g(v)
                out.append(WallFunction(g0, g1, "dependency", ci))
        for fi, F in enumerate(C.facet_vertices):
            W = T.place_class(*C.neighbours[fi])
            b = next(w for w in W if w not in F)
            g0, g1 = g(b)
            out.append(WallFunction(g0, g1, "facet", ci))
    return out


def validity_interval(T: Tiling, Q0: QuadraticForm, Q1: QuadraticForm) -> tuple:
    """(lo, hi, closed): parameters for which the tiling T is the Delaunay tiling.

    ``closed`` is True when the tiling is only valid at the single point lo == hi.
    Bounds may be -inf/inf (None).
    """
    lo, hi = None, None
    point = None
    for w in wall_functions(T, Q0, Q1):
        if w.kind == "dependency":
            if w.g0 == 0 and w.g1 == 0:
                continue
            if w.g0 == w.g1:
                raise NotDelaunay("tiling is never Delaunay on this line")
            t = w.g0 / (w.g0 - w.g1)
            if point is not None and point != t:
                raise NotDelaunay("inconsistent dependency constraints")
            point = t
            continue
        slope = w.g1 - w.g0
        if slope == 0:
            if w.g0 <= 0:
                raise NotDelaunay("facet condition violated everywhere")
            continue
        root = -w.g0 / slope
        if slope > 0:
            lo = root if lo is None else max(lo, root)
        else:
            hi = root if hi is None else min(hi, root)
    if point is not None:
        return point, point, True
    return lo, hi, False


# ---------------------------------------------------------------------------
# segment scan


@dataclass
class TilingSample:
    lo: Fraction
    hi: Fraction
    is_point: bool
    digest: str
    n_classes: int
    census: dict
    sample: Fraction = None  # parameter at which the tiling was computed

    def label(self) -> str:
        return str(self.lo) if self.is_point else f"({self.lo},{self.hi})"


@dataclass
class SegmentReport:
    endpoints: tuple
    breakpoints: list
    intervals: list  # TilingSample, sorted along the segment (points and open intervals)
    wall_crossings: list  # (t, label)
    certified: bool = True
    tilings: dict = field(default_factory=dict, repr=False)

    def fingerprints(self) -> list[str]:
        return [s.digest for s in self.intervals]

    def tiling_of(self, s: TilingSample) -> Tiling:
        return self.tilings[s.sample]

    def neighbours_of(self, t) -> tuple:
        """The open-interval samples ending and starting at t."""
        below = next(s for s in self.intervals if not s.is_point and s.hi == t)
        above = next(s for s in self.intervals if not s.is_point and s.lo == t)
        return below, above


class DenominatorCap(RuntimeError):
    pass


def _sample(T: Tiling, lo, hi, is_point, t=None) -> TilingSample:
    census = {}
    for C in T.classes:
        census[C.n_vertices] = census.get(C.n_vertices, 0) + 1
    return TilingSample(lo, hi, is_point, T.digest(), len(T.classes), dict(sorted(census.items())),
                        lo if t is None else t)


def scan_segment(Q0: QuadraticForm, Q1: QuadraticForm, denominator_cap: int = 2 ** 40, window_cap=None,
                 walls: bool = True, progress=None) -> SegmentReport:
    ldl(Q0)
    ldl(Q1)
    tilings: dict = {}

    def tiling_at(t) -> Tiling:
        t = frac(t)
        if t not in tilings:
            if progress:
                progress(f"tiling at t={t}")
            tilings[t] = build_tiling(blend(Q0, Q1, t), window_cap)
        return tilings[t]

    samples: list[TilingSample] = []
    pending = [(Fraction(0), Fraction(1))]
    while pending:
        a, b = pending.pop()
        if a >= b:
            continue
        t = (a + b) / 2
        if t.denominator > denominator_cap:
            raise DenominatorCap(f"sample denominator exceeds {denominator_cap}")
        T = tiling_at(t)
        lo, hi, closed = validity_interval(T, Q0, Q1)
        if closed:
            samples.append(_sample(T, lo, lo, True, t))
            pending += [(a, t), (t, b)]
            continue
        lo = a if lo is None or lo < a else lo
        hi = b if hi is None or hi > b else hi
        samples.append(_sample(T, lo, hi, False, t))
        if lo > a:
            pending.append((a, lo))
            if lo < 1:
                Tl = tiling_at(lo)
                samples.append(_sample(Tl, lo, lo, True))
        if hi < b:
            pending.append((hi, b))
            if hi > 0:
                Th = tiling_at(hi)
                samples.append(_sample(Th, hi, hi, True))
    for t in (Fraction(0), Fraction(1)):
        samples.append(_sample(tiling_at(t), t, t, True))
    # dedupe points, sort along the segment
    uniq = {}
    for s in samples:
        uniq[(s.lo, s.hi, s.is_point)] = s
    ordered = sorted(uniq.values(), key=lambda s: (s.lo, 0 if s.is_point else 1))
    breakpoints = sorted({s.lo for s in ordered if s.is_point and 0 < s.lo < 1})

    # a breakpoint tiling must differ from both neighbouring interval tilings
    certified = True
    for i, s in enumerate(ordered):
        if s.is_point and 0 < s.lo < 1:
            for j in (i - 1, i + 1):
                if ordered[j].digest == s.digest:
                    certified = False
    # each open interval tiling refines the tilings at its endpoints
    for s in ordered:
        if not s.is_point:
            inner = tilings[s.sample]
            for e in (s.lo, s.hi):
                if e in tilings and not refines(inner, tilings[e]):
                    certified = False

    crossings = perfect_wall_crossings(Q0, Q1) if walls else []
    return SegmentReport((Q0, Q1), breakpoints, ordered, crossings, certified, tilings)


# ---------------------------------------------------------------------------
# perfect walls


def containing_perfect_form(Q: QuadraticForm) -> QuadraticForm | None:
    """A perfect form whose cone contains Q, trying the dual of Q.

    Only this one candidate is examined; None means the check is inconclusive.
    """
    cand = dual(Q)
    if not is_perfect(cand):
        return None
    try:
        perfect_cone_membership(Q, minima(cand).minimal_vectors)
    except NotMember:
        return None
    return cand


def perfect_wall_crossings(Q0: QuadraticForm, Q1: QuadraticForm) -> list:
    P0 = containing_perfect_form(Q0)
    P1 = containing_perfect_form(Q1)
    if P0 is None or P1 is None:
        return []
    m0 = minima(P0)
    m1 = minima(P1)
    if m0.minimal_vectors == m1.minimal_vectors and P0.scale(1 / m0.min_value) == P1.scale(1 / m1.min_value):
        return []
    wall = P0.scale(1 / m0.min_value) - P1.scale(1 / m1.min_value)
    try:
        t = hyperplane_crossing(wall, Q0, Q1)
    except (NoCrossing, IdenticallyZero):
        return []
    label = f"wall between perfect cones with {len(m0.minimal_vectors)} and {len(m1.minimal_vectors)} minimal vectors"
    return [(t, label, wall)]


# ---------------------------------------------------------------------------
# structure at a point of the segment


@dataclass
class TilingCensus:
    t: Fraction
    tiling: Tiling
    by_vertex_count: dict
    by_type: dict

    def classes_with(self, k: int) -> list:
        return [C for C in self.tiling.classes if C.n_vertices == k]


def midpoint_tiling_structure(Q0: QuadraticForm, Q1: QuadraticForm, t, tiling: Tiling | None = None) -> TilingCensus:
    t = frac(t)
    T = tiling or build_tiling(blend(Q0, Q1, t))
    by_count: dict = {}
    for C in T.classes:
        by_count[C.n_vertices] = by_count.get(C.n_vertices, 0) + 1
    return TilingCensus(t, T, dict(sorted(by_count.items())), T.census())


def circuit_triangulations(vertices: Sequence[Sequence[int]]) -> tuple[list[frozenset], list[frozenset]]:
    """The two triangulations of a polytope with n + 2 vertices in general position
    (a circuit): drop one vertex with positive, resp. negative, dependency coefficient."""
    V = [tuple(v) for v in vertices]
    lam = affine_dependency(V)
    pos = [frozenset(V[:i] + V[i + 1:]) for i in range(len(V)) if lam[i] > 0]
    neg = [frozenset(V[:i] + V[i + 1:]) for i in range(len(V)) if lam[i] < 0]
    return pos, neg


def circuit_functional(vertices: Sequence[Sequence[int]]) -> RepartitioningFunctional:
    """Repartitioning functional of a circuit from its +-1 dependency split."""
    V = [tuple(v) for v in vertices]
    lam = affine_dependency(V)
    plus = [v for v, l in zip(V, lam) if l > 0]
    minus = [v for v, l in zip(V, lam) if l < 0]
    if set(abs(l) for l in lam if l) != {1}:
        raise AffineMismatch("dependency coefficients are not all +-1")
    return repartitioning_functional(plus, minus)


def tiling_contains(T: Tiling, vertices) -> bool:
    return canonical_form(vertices)[0] in T.index
