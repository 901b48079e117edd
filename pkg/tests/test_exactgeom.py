import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voronoiforms import dataset as D
from voronoiforms.exactgeom import (
    Infeasible,
    RationalMatrix,
    SingularMatrix,
    Unbounded,
    affine_dependency,
    from_halfspaces,
    hull,
    intersect,
    invert,
    lattice_points,
    linprog_max,
    lower_hull,
    matrix,
    nullspace,
    rank,
)


def brute_rank(rows):
    """Rank as the size of the largest nonsingular square minor."""
    m, n = len(rows), len(rows[0])
    for k in range(min(m, n), 0, -1):
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                if matrix([[rows[i][j] for j in ci] for i in ri]).det() != 0:
                    return k
    return 0


def test_rank_trivial():
    assert rank(RationalMatrix.identity(6)) == 6
    assert rank(RationalMatrix.zeros(3, 3)) == 0


def test_rank_of_rank_one_forms_a2_cubed():
    # minimal vectors of A2+A2+A2 give 9 oriented vectors, so the 21x21 Gram matrix has rank 9
    blocks = [(1, 0), (0, 1), (1, -1)]
    vecs = []
    for b in range(3):
        for u in blocks:
            v = [0] * 6
            v[2 * b], v[2 * b + 1] = u
            vecs.append(v)
    sym = [[v[i] * v[j] * (1 if i == j else 2) for i in range(6) for j in range(i, 6)] for v in vecs]
    gram = [[sum(a * b for a, b in zip(x, y)) for y in sym] for x in sym]
    assert len(gram) == 9 and rank(gram) == 9
    # the same through elimination on the 9 x 21 coefficient matrix
    assert rank(sym) == 9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=3, max_size=3))
def test_rank_matches_minor_oracle(rows):
    assert rank(rows) == brute_rank(rows)


def test_invert_examples():
    assert invert(RationalMatrix.identity(4)) == RationalMatrix.identity(4)
    assert invert(D.U_STAR) == D.U_STAR_INV
    expected = D.F_E6_STAR.scale(Fraction(8, 3) / (D.M * D.M))
    assert invert(D.P_E6) == expected
    with pytest.raises(SingularMatrix):
        invert([[1, 2], [2, 4]])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=6, max_size=6),
                min_size=6, max_size=6))
def test_invert_involution(rows):
    M = matrix(rows)
    if M.det() == 0:
        with pytest.raises(SingularMatrix):
            invert(M)
        return
    assert invert(invert(M)) == M
    assert M @ invert(M) == RationalMatrix.identity(6)


def test_hull_examples():
    sq = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(sq.vertices) == 4 and len(sq.inequalities) == 4 and sq.affine_dim == 2
    G = hull(D.G_VERTICES)
    assert len(G.vertices) == 27 and G.affine_dim == 6
    Gs = hull(D.G_STAR_VERTICES)
    assert len(Gs.vertices) == 9 and Gs.affine_dim == 6


def test_hull_lower_dimensional():
    seg = hull([(0, 0, 0), (2, 2, 2), (1, 1, 1)])
    assert seg.affine_dim == 1 and sorted(seg.vertices) == [(0, 0, 0), (2, 2, 2)]
    assert len(lattice_points(seg)) == 3


def test_intersections():
    sq = hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert intersect(sq, sq) == sq
    pt = intersect(hull(D.S_Q[1]), hull(D.S_G[1]))
    assert pt.vertices == (tuple(Fraction(x) for x in D.WITNESS),)
    QG = intersect(hull(D.Q_VERTICES), hull(D.G_VERTICES))
    assert tuple(Fraction(x) for x in D.WITNESS) in set(QG.vertices)


def test_lattice_points():
    assert sorted(lattice_points(hull([(0, 0), (1, 0), (0, 1), (1, 1)]))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(lattice_points(hull([(0, 0), (2, 0)]))) == 3
    with pytest.raises(Unbounded):
        lattice_points(from_halfspaces(2, [((-1, 0), 0), ((0, -1), 0)]))


def test_lattice_points_gosset_against_box_scan():
    G = hull(D.G_VERTICES)
    lo = [min(v[i] for v in D.G_VERTICES) for i in range(6)]
    hi = [max(v[i] for v in D.G_VERTICES) for i in range(6)]
    brute = {x for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]) if G.contains(x)}
    assert set(lattice_points(G)) == brute
    assert set(D.G_VERTICES) <= brute


def _lower_cells(points, Q):
    lifted = [p + (sum(p[i] * Q[i][j] * p[j] for i in range(len(p)) for j in range(len(p))),) for p in points]
    return sorted(len(f.points) for f in lower_hull(lifted))


def test_lower_hull():
    assert len(lower_hull([(-1, 1), (0, 0), (1, 1)])) == 2
    window = list(itertools.product(range(-2, 3), repeat=2))
    assert set(_lower_cells(window, [[1, 0], [0, 1]])) == {4}      # unit squares
    assert set(_lower_cells(window, [[2, 1], [1, 2]])) == {3}      # triangles


def test_affine_dependency():
    lam = affine_dependency([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert sum(lam) == 0 and sorted(abs(x) for x in lam) == [1, 1, 1, 1]


def test_nullspace():
    ns = nullspace([[1, 1, 1]], 3)
    assert len(ns) == 2 and all(sum(v) == 0 for v in ns)


def test_linprog():
    opt, x = linprog_max([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert opt == Fraction(14, 5) and x == (Fraction(8, 5), Fraction(6, 5))
    with pytest.raises(Infeasible):
        linprog_max([1], [[1]], [-1])
    with pytest.raises(Unbounded):
        linprog_max([1], [[-1]], [0])


# --- property suites against brute force -----------------------------------

pts2 = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=7)
pts3 = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=7)


def brute_in_hull(points, x):
    """x in conv(points) by LP feasibility over convex weights."""
    k = len(points)
    A_eq = [[p[i] for p in points] for i in range(len(x))] + [[1] * k]
    b_eq = list(x) + [1]
    try:
        linprog_max([0] * k, A_eq=A_eq, b_eq=b_eq)
        return True
    except Infeasible:
        return False


@settings(max_examples=40, deadline=None)
@given(pts2)
def test_hull_membership_oracle_2d(points):
    P = hull(points)
    for x in itertools.product(range(-4, 5), repeat=2):
        assert P.contains(x) == brute_in_hull(points, x)
    assert hull(P.vertices) == P
    for v in P.vertices:
        assert all(sum(a * b for a, b in zip(n, v)) <= off for n, off in P.inequalities)


@settings(max_examples=20, deadline=None)
@given(pts3, pts3)
def test_intersection_oracle_3d(a, b):
    P, Q = hull(a), hull(b)
    I = intersect(P, Q)
    box = list(itertools.product(range(-2, 3), repeat=3))
    got = set(lattice_points(I)) if not I.is_empty else set()
    assert got == {x for x in box if P.contains(x) and Q.contains(x)}
    J = intersect(Q, P)
    assert I.is_empty == J.is_empty and (I.is_empty or I == J)


@settings(max_examples=15, deadline=None)
@given(pts2, pts2, pts2)
def test_intersection_associative(a, b, c):
    P, Q, R = hull(a), hull(b), hull(c)
    L = intersect(intersect(P, Q), R)
    Rr = intersect(P, intersect(Q, R))
    assert L.is_empty == Rr.is_empty and (L.is_empty or L == Rr)
