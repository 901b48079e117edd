"""The dimension-6 counterexample as a table of exact checks.

Every check carries the acceptance criterion it belongs to.  Informational
checks are reported but never affect the verdict.  Heavy objects (groups,
tilings, the segment scan) are computed once per ``Context`` and shared.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np

from . import dataset as D
from .delaunay import (
    build_tiling,
    homology_classes,
    sublattice_section,
    verify_certificate,
)
from .exactgeom import RationalMatrix, hull, intersect, invert, is_integral, lattice_points
from .ltype import (
    circuit_functional,
    circuit_triangulations,
    commensurate,
    hyperplane_crossing,
    repartitioning_functional,
    scan_segment,
    tiling_contains,
)
from .qform import QuadraticForm, eutaxy, is_perfect, minima, transform
from .symmetry import (
    automorphism_group,
    cell_stabilizer,
    dual_group,
    multi_set_stabilizer,
    orbits,
    orbits_of_sets,
    restriction_kernel,
    set_stabilizer,
)

M = D.M
HALF = Fraction(1, 2)


@dataclass
class ReproCheck:
    criterion: str
    name: str
    passed: bool
    detail: str = ""
    informational: bool = False


def _pm(vectors) -> frozenset:
    return frozenset(vectors) | frozenset(tuple(-x for x in v) for v in vectors)


class Context:
    """Lazily computed shared objects."""

    def __init__(self, window_cap=None, progress=None):
        self.window_cap = window_cap
        self.progress = progress

    def _say(self, msg):
        if self.progress:
            self.progress(msg)

    @cached_property
    def G(self):
        self._say("automorphism group of phi_E6")
        return automorphism_group(D.PHI_E6)

    @cached_property
    def G_star(self):
        self._say("automorphism group of phi_E6*")
        return automorphism_group(D.PHI_E6_STAR)

    @cached_property
    def G_D4(self):
        return multi_set_stabilizer(self.G, [D.S1, D.S2, D.S3])

    @cached_property
    def scan(self):
        self._say("segment scan")
        return scan_segment(D.PHI_E6, D.PHI_E6_STAR, window_cap=self.window_cap, progress=self.progress)

    @cached_property
    def T0(self):
        return self.scan.tilings.get(Fraction(0)) or build_tiling(D.PHI_E6, self.window_cap)

    @cached_property
    def T1(self):
        return self.scan.tilings.get(Fraction(1)) or build_tiling(D.PHI_E6_STAR, self.window_cap)

    @cached_property
    def T_half(self):
        return self.scan.tilings.get(HALF) or build_tiling(D.phi_t(HALF), self.window_cap)

    @cached_property
    def star0(self):
        return self.T0.star()

    @cached_property
    def star1(self):
        return self.T1.star()

    @cached_property
    def breakpoint_tiling(self):
        """Tiling at the single computed breakpoint, if there is exactly one."""
        bps = self.scan.breakpoints
        return (bps[0], self.scan.tilings[bps[0]]) if len(bps) == 1 else (None, None)


# ---------------------------------------------------------------------------
# per-criterion checks


def dataset_checks(ctx: Context, corrupt: str | None = None) -> list[ReproCheck]:
    rep = D.verify_dataset(corrupt)
    return [ReproCheck("D", c.name, c.passed, c.detail) for c in rep.checks]


def criterion_1(ctx) -> list[ReproCheck]:
    out = []
    for label, Q, fam, k in (("pi_E6", D.PI_E6, D.P2 | D.P3, 72), ("pi_E6*", D.PI_E6_STAR, D.P1 | D.P2, 54)):
        r = minima(Q)
        mv = _pm(r.minimal_vectors)
        out.append(ReproCheck("1", f"{label}: {k} minimal vectors equal to the expanded families",
                              r.min_value == M and len(mv) == k and mv == fam,
                              f"m={r.min_value}, {len(mv)} vectors"))
    return out


def criterion_2(ctx) -> list[ReproCheck]:
    out = []
    for label, Q, second, k in (("phi_E6", D.PHI_E6, 2 * M, 270), ("phi_E6*", D.PHI_E6_STAR, Fraction(3, 2) * M, 72)):
        r = minima(Q)
        n_long = len(_pm(r.long_vectors))
        out.append(ReproCheck("2", f"{label}: second minimum {second} with {k} vectors",
                              r.second_min == second and n_long == k, f"second={r.second_min}, {n_long} vectors"))
    return out


def criterion_3(ctx) -> list[ReproCheck]:
    target = RationalMatrix.identity(6).scale(Fraction(3, 8) * M * M)
    return [
        ReproCheck("3", "F_E6 P_E6* = (3/8) m^2 I", D.F_E6 @ D.P_E6_STAR == target),
        ReproCheck("3", "F_E6* P_E6 = (3/8) m^2 I", D.F_E6_STAR @ D.P_E6 == target),
    ]


def criterion_4(ctx) -> list[ReproCheck]:
    out = []
    for label, Q in (("pi_E6", D.PI_E6), ("pi_E6*", D.PI_E6_STAR)):
        cert = is_perfect(Q)
        out.append(ReproCheck("4", f"{label} perfect with rank-21 certificate", bool(cert) and cert.rank == 21,
                              f"rank {cert.rank} of {cert.dimension}"))
        e = eutaxy(Q)
        out.append(ReproCheck("4", f"{label} eutactic with uniform weights", e.is_uniform(),
                              f"weight {sorted(set(e.weights.values()))}"))
    for label, lhs, vecs, w in (
        ("pi_E6 = (m/12) sum vv^T over S_E6*", D.P_E6, D.S_E6_STAR, M / 12),
        ("pi_E6* = (m/16) sum vv^T over S_E6", D.P_E6_STAR, D.S_E6, M / 16),
        ("phi_E6 = (m/12) sum vv^T over P_E6*", D.F_E6, D.P_E6_STAR_VECTORS, M / 12),
        ("phi_E6* = (m/16) sum vv^T over P_E6", D.F_E6_STAR, D.P_E6_VECTORS, M / 16),
    ):
        out.append(ReproCheck("4", label, lhs == D.sum_rank_one(vecs, w)))
    return out


def criterion_5(ctx) -> list[ReproCheck]:
    G = ctx.G
    out = [ReproCheck("5", "|aut(phi_E6)| = 103680", G.order == 103680, str(G.order))]
    o72 = orbits(G, D.S_E6)
    L = _pm(minima(D.PHI_E6).long_vectors)
    o270 = orbits(G, L)
    out.append(ReproCheck("5", "transitive on the 72 minimal vectors", [len(o) for o in o72] == [72]))
    out.append(ReproCheck("5", "transitive on the 270 long vectors", [len(o) for o in o270] == [270]))
    cells = [frozenset(c.vertices) for c in ctx.star0.cells]
    oc = orbits_of_sets(G, cells)
    out.append(ReproCheck("5", "transitive on the 54 star cells", len(cells) == 54 and [len(o) for o in oc] == [54],
                          f"{len(cells)} cells, orbits {[len(o) for o in oc]}"))
    gd4 = ctx.G_D4
    out.append(ReproCheck("5", "|G_D4| = 2304", gd4.order == 2304, str(gd4.order)))
    out.append(ReproCheck("5", "stabilizer of E_G^1 equals G_D4", set_stabilizer(G, D.E_G[1]) == gd4))
    out.append(ReproCheck("5", "stabilizer of the reference G-tope has order 1920",
                          cell_stabilizer(G, hull(D.G_VERTICES)).order == 1920))
    out.append(ReproCheck("5", "stabilizer of Delta_G^1 has order 384",
                          set_stabilizer(G, D.DELTA_G_REF[1]).order == 384))
    basis, _ = sublattice_section(D.PHI_E6, D.P1)
    K = restriction_kernel(gd4, basis)
    k0 = np.array(D.K0.to_int_rows(), dtype=np.int64)
    out.append(ReproCheck("5", "restriction kernel = {e, k0} with k0 as printed",
                          K.order == 2 and k0 in K, f"order {K.order}"))
    out.append(ReproCheck("5", "i12 in aut(phi_E6); i1 non-integral",
                          np.array(D.I12.to_int_rows(), dtype=np.int64) in G and not D.I1.is_integral()))
    Gs = ctx.G_star
    out.append(ReproCheck("5", "dual_group(aut phi_E6) = U* aut(phi_E6*) U*^-1",
                          dual_group(G) == Gs.conjugate(D.U_STAR, D.U_STAR_INV)))
    out.append(ReproCheck("5", "aut(phi_E6*) transitive on 54 minimal and 72 long vectors",
                          [len(o) for o in orbits(Gs, D.S_E6_STAR)] == [54]
                          and [len(o) for o in orbits(Gs, D.L_E6_STAR)] == [72]))
    return out


def criterion_6(ctx) -> list[ReproCheck]:
    s0, s1 = ctx.star0, ctx.star1
    out = [ReproCheck("6", "star(phi_E6): 54 cells of 27 vertices", len(s0) == 54 and set(s0.vertex_counts()) == {27},
                      f"{len(s0)} cells, vertex counts {dict(s0.vertex_counts())}")]
    h1 = homology_classes(s1)
    out.append(ReproCheck("6", "star(phi_E6*): 9-vertex cells in 40 homology classes",
                          set(s1.vertex_counts()) == {9} and len(h1) == 40, f"{len(h1)} classes"))
    out.append(ReproCheck("6", "G*-topes in the star (720 = 2x9x40 vs 270)", len(s1) == 720,
                          f"computed {len(s1)}", informational=True))
    out.append(ReproCheck("6", "homology classes in star(phi_E6)", True,
                          f"computed {len(homology_classes(s0))}", informational=True))
    return out


def criterion_7(ctx) -> list[ReproCheck]:
    basis, R = sublattice_section(D.PHI_E6, D.P1)
    nmin = len(_pm(minima(R).minimal_vectors))
    st = build_tiling(R, ctx.window_cap).star()
    faces = st.faces_at_origin()
    cross = sum(1 for c in st.cells if len(c.vertices) == 8)
    got = (faces.get(1, 0), faces.get(2, 0), faces.get(3, 0), cross)
    return [
        ReproCheck("7", "D4 section has 24 minimal vectors", len(basis) == 4 and nmin == 24, f"{nmin}"),
        ReproCheck("7", "origin star: 24 edges, 96 triangles, 96 3-simplices, 24 cross-polytopes",
                   got == (24, 96, 96, 24) and len(st) == 24, str(got)),
    ]


def criterion_8(ctx) -> list[ReproCheck]:
    P = intersect(hull(D.Q_VERTICES), hull(D.G_VERTICES))
    w = tuple(Fraction(x) for x in D.WITNESS)
    out = [ReproCheck("8", "Q-tope n G-tope has the vertex (1/4)[0,0,1,1,1,1]", w in set(P.vertices),
                      f"non-integral vertices {[tuple(map(str, v)) for v in P.vertices if not is_integral(v)]}")]
    v = commensurate(D.PHI_E6, D.PHI_E6_STAR, tilings=(ctx.T0, ctx.T1, ctx.T_half))
    ok = not v.commensurate and v.witness is not None and not is_integral(v.witness[2])
    out.append(ReproCheck("8", "tilings of phi_E6 and phi_E6* are incommensurate", ok,
                          f"witness vertex {tuple(map(str, v.witness[2])) if v.witness else None}"))
    return out


def _census(T) -> tuple:
    by = {}
    for C in T.classes:
        by[C.n_vertices] = by.get(C.n_vertices, 0) + 1
    return by.get(9, 0), by.get(8, 0), by.get(7, 0)


def criterion_9(ctx) -> list[ReproCheck]:
    got = _census(ctx.T_half)
    out = [ReproCheck("9", "census at t=1/2: 24 T-topes, 12 R-topes, 96 white simplices",
                      got == (24, 12, 96), f"computed (T, R, white) = {got}")]
    tb, Tb = ctx.breakpoint_tiling
    if Tb is None:
        out.append(ReproCheck("9", "census at the computed breakpoint", False, "no unique breakpoint"))
        return out
    got_b = _census(Tb)
    out.append(ReproCheck("9", f"census at the computed breakpoint t={tb}: 24 / 12 / 96",
                          got_b == (24, 12, 96), str(got_b)))
    below, above = (ctx.scan.tiling_of(s) for s in ctx.scan.neighbours_of(tb))
    ok = True
    Rs = [C for C in Tb.classes if C.n_vertices == 8]
    for C in Rs:
        pos, neg = circuit_triangulations(C.rep)
        if len(pos) != 4 or len(neg) != 4:
            ok = False
            continue
        a = [all(tiling_contains(T, s) for s in tri) for T in (below, above) for tri in (pos, neg)]
        # exactly one triangulation below and the other above
        if a not in ([True, False, False, True], [False, True, True, False]):
            ok = False
    out.append(ReproCheck("9", "R-topes have 8 vertices and retile into two 4-simplex triangulations", ok and len(Rs) == 12,
                          f"{len(Rs)} R classes"))
    return out


def criterion_10(ctx) -> list[ReproCheck]:
    out = []
    piR = repartitioning_functional(D.V_G, D.V_Q)
    tR = hyperplane_crossing(piR, D.PHI_E6, D.PHI_E6_STAR)
    out.append(ReproCheck("10", "pi_R crossing at t = 1/2", tR == HALF, f"computed t = {tR}"))
    tb, Tb = ctx.breakpoint_tiling
    if Tb is not None:
        ts = sorted({hyperplane_crossing(circuit_functional(C.rep), D.PHI_E6, D.PHI_E6_STAR)
                     for C in Tb.classes if C.n_vertices == 8})
        out.append(ReproCheck("10", "all 12 R-class functionals cross at a common point", len(ts) == 1,
                              f"crossings {[str(t) for t in ts]}"))
        out.append(ReproCheck("10", "the common R crossing is t = 1/2", ts == [HALF], f"{[str(t) for t in ts]}"))
    piP = D.PI_E6_STAR - D.PI_E6
    tP = hyperplane_crossing(piP, D.PHI_E6, D.PHI_E6_STAR)
    out.append(ReproCheck("10", "perfect-wall crossing at t = 2/5", tP == Fraction(2, 5), f"computed t = {tP}"))
    rep = ctx.scan
    bps = rep.breakpoints
    out.append(ReproCheck("10", "exactly one tiling breakpoint", len(bps) == 1, f"{[str(b) for b in bps]}"))
    out.append(ReproCheck("10", "the breakpoint is t = 1/2", bps == [HALF], f"{[str(b) for b in bps]}"))
    digests = rep.fingerprints()
    out.append(ReproCheck("10", "five distinct fingerprints along the segment",
                          len(digests) == 5 and len(set(digests)) == 5 and rep.certified,
                          " ".join(f"{s.label()}:{s.digest}" for s in rep.intervals)))
    walls = [t for t, _, _ in rep.wall_crossings]
    inside = any(not s.is_point and s.lo < Fraction(2, 5) < s.hi for s in rep.intervals)
    out.append(ReproCheck("10", "tiling constant across the perfect wall at 2/5",
                          walls == [Fraction(2, 5)] and inside, f"walls {[str(t) for t in walls]}"))
    out.append(ReproCheck("10", "phi_1/2 is G_D4-invariant", all(is_form_invariant(D.phi_t(HALF), g) for g in ctx.G_D4.generators)))
    return out


def is_form_invariant(Q: QuadraticForm, g) -> bool:
    return transform(Q, RationalMatrix(tuple(tuple(int(x) for x in r) for r in g))) == Q


# ---------------------------------------------------------------------------
# property suite on random small instances


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1])
        for r in range(n):
            U[r][i] += c * U[r][j]
    return U


def random_form(rng: random.Random, n: int) -> QuadraticForm:
    base = rng.choice(["I", "A"])
    G = [[(2 if i == j else (1 if base == "A" and abs(i - j) == 1 else 0)) for j in range(n)] for i in range(n)]
    for i in range(n):
        G[i][i] += rng.randint(0, 2)
    Q = QuadraticForm.from_rows(G)
    return transform(Q, random_unimodular(rng, n))


def _brute_min_certificate(Q: QuadraticForm, cell, radius: int) -> bool:
    """f >= 0 on a box around the cell, zero exactly at the vertices."""
    n = Q.n
    lo = [min(v[i] for v in cell.vertices) - radius for i in range(n)]
    hi = [max(v[i] for v in cell.vertices) + radius for i in range(n)]
    verts = set(cell.vertices)
    for x in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        val = cell.f(Q, x)
        if val < 0 or (val == 0) != (x in verts):
            return False
    return True


def property_checks(seed: int = 0, rounds: int = 4) -> list[ReproCheck]:
    rng = random.Random(seed)
    ok_cert = ok_pair = ok_eq = ok_hull = True
    notes = []
    for r in range(rounds):
        n = 2 + r % 3
        Q = random_form(rng, n)
        T = build_tiling(Q)
        st = T.star()
        for cell in st.cells:
            if not verify_certificate(Q, cell) or (n <= 3 and not _brute_min_certificate(Q, cell, 2)):
                ok_cert = False
        # facet pairing: each facet through the origin is shared by exactly two star cells
        count = {}
        for cell in st.cells:
            P = cell.polytope
            for a, b in P.inequalities:
                F = frozenset(v for v in cell.vertices if sum(x * y for x, y in zip(a, v)) == b)
                if (0,) * n in F:
                    count[F] = count.get(F, 0) + 1
        if any(c != 2 for c in count.values()):
            ok_pair = False
        # equivariance: star(U^T Q U) = U^-1 star(Q)
        U = random_unimodular(rng, n)
        Um = RationalMatrix(tuple(map(tuple, U)))
        Ui = invert(Um)
        st2 = build_tiling(transform(Q, U)).star()
        img = sorted(tuple(sorted(tuple(int(x) for x in (Ui @ v)) for v in c.vertices)) for c in st.cells)
        if img != sorted(c.vertices for c in st2.cells):
            ok_eq = False
        # hull / intersection against brute force on small random point sets
        pts = {tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n + 4)}
        P1 = hull(sorted(pts))
        pts2 = {tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n + 4)}
        P2 = hull(sorted(pts2))
        box = list(product(range(-2, 3), repeat=n))
        ok_hull &= set(lattice_points(P1)) == {x for x in box if P1.contains(x)}
        I = intersect(P1, P2)
        brute = {x for x in box if P1.contains(x) and P2.contains(x)}
        got = set(lattice_points(I)) if not I.is_empty else set()
        ok_hull &= got == brute
        notes.append(f"n={n}:{len(st)} cells")
    return [
        ReproCheck("11", "certificates globally positive (independent enumeration)", ok_cert, ", ".join(notes)),
        ReproCheck("11", "star facets through the origin pair up", ok_pair),
        ReproCheck("11", "star transform equivariance", ok_eq),
        ReproCheck("11", "hull/intersection agree with brute force", ok_hull),
    ]


CRITERIA = {
    "1": criterion_1, "2": criterion_2, "3": criterion_3, "4": criterion_4, "5": criterion_5,
    "6": criterion_6, "7": criterion_7, "8": criterion_8, "9": criterion_9, "10": criterion_10,
}


def run_criterion(key: str, ctx: Context | None = None, seed: int = 0) -> list[ReproCheck]:
    ctx = ctx or Context()
    if key == "11":
        return property_checks(seed)
    if key == "D":
        return dataset_checks(ctx)
    return CRITERIA[key](ctx)


def reproduce(ctx: Context | None = None, corrupt: str | None = None, seed: int = 0) -> list[ReproCheck]:
    ctx = ctx or Context()
    out = dataset_checks(ctx, corrupt)
    for key in CRITERIA:
        out.extend(CRITERIA[key](ctx))
    out.extend(property_checks(seed))
    return out


def verdict(checks: list[ReproCheck]) -> bool:
    return all(c.passed for c in checks if not c.informational)
