import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voronoiforms import dataset as D
from voronoiforms.delaunay import build_tiling, certify_cell, verify_certificate
from voronoiforms.ltype import (
    AffineMismatch,
    EmptyIntersection,
    IdenticallyZero,
    NoCrossing,
    circuit_triangulations,
    commensurate,
    hyperplane_crossing,
    intermediate_cell,
    midpoint_tiling_structure,
    refines,
    repartitioning_functional,
    scan_segment,
    validity_interval,
)
from voronoiforms.qform import NotPositiveDefinite, QuadraticForm, blend, trace_product

A = QuadraticForm.from_rows([[2, 1], [1, 2]])
B = QuadraticForm.from_rows([[2, -1], [-1, 2]])


def test_commensurate_trivial():
    assert commensurate(A, A).commensurate
    assert commensurate(A, A.scale(2)).commensurate
    assert commensurate(A, A.scale(Fraction(7, 3))).commensurate == commensurate(A, A).commensurate


def test_flip_pair_is_incommensurate():
    v = commensurate(A, B)
    assert not v.commensurate
    c1, c2, x = v.witness
    assert any(xi.denominator != 1 for xi in x)
    assert not commensurate(B, A).commensurate


def test_commensurate_square_and_triangles():
    # squares of I2 are refined by the triangles of A2
    v = commensurate(QuadraticForm.identity(2), A)
    assert v.commensurate and v.intersection_star


def test_commensurate_rejects_non_pd():
    with pytest.raises(NotPositiveDefinite):
        commensurate(A, QuadraticForm.from_rows([[1, 2], [2, 1]]))


def test_repartitioning_functional():
    assert repartitioning_functional([(0, 0), (1, 1)], [(0, 0), (1, 1)]).form == QuadraticForm.from_rows([[0, 0], [0, 0]])
    f = repartitioning_functional([(0, 0), (1, 1)], [(1, 0), (0, 1)])
    assert f.form == QuadraticForm.from_rows([[0, 1], [1, 0]])
    with pytest.raises(AffineMismatch):
        repartitioning_functional([(0, 0), (1, 1)], [(1, 0), (0, 0)])
    built = repartitioning_functional(D.V_G, D.V_Q).form.gram
    assert built == D.repartitioning_matrix()


def test_hyperplane_crossing():
    f = repartitioning_functional([(0, 0), (1, 1)], [(1, 0), (0, 1)])
    assert hyperplane_crossing(f, A, B) == Fraction(1, 2)
    with pytest.raises(NoCrossing):
        hyperplane_crossing(f, A, A)
    with pytest.raises(IdenticallyZero):
        hyperplane_crossing(f, QuadraticForm.identity(2), QuadraticForm.from_rows([[1, 0], [0, 3]]))
    assert hyperplane_crossing(D.PI_E6_STAR - D.PI_E6, D.PHI_E6, D.PHI_E6_STAR) == Fraction(2, 5)


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_functional_is_affine_along_segment(t):
    f = repartitioning_functional(D.V_G, D.V_Q)
    a, b = trace_product(f.form, D.PHI_E6), trace_product(f.form, D.PHI_E6_STAR)
    assert trace_product(f.form, blend(D.PHI_E6, D.PHI_E6_STAR, t)) == (1 - t) * a + t * b
    tc = hyperplane_crossing(f, D.PHI_E6, D.PHI_E6_STAR)
    assert trace_product(f.form, blend(D.PHI_E6, D.PHI_E6_STAR, tc)) == 0


def test_intermediate_cell():
    c = certify_cell(A, [(0, 0), (1, 0), (0, 1)])
    assert intermediate_cell(c, c).vertices == c.vertices
    far = certify_cell(A, [(5, 5), (6, 5), (5, 6)])
    with pytest.raises(EmptyIntersection):
        intermediate_cell(c, far)


def test_intermediate_cells_e6():
    G = certify_cell(D.PHI_E6, D.G_VERTICES)
    T = certify_cell(D.PHI_E6_STAR, D.G_STAR_VERTICES)
    assert set(D.G_STAR_VERTICES) <= set(D.G_VERTICES)
    assert intermediate_cell(G, T).vertices == tuple(sorted(D.G_STAR_VERTICES))
    Q = certify_cell(D.PHI_E6_STAR, D.Q_VERTICES)
    W = intermediate_cell(G, Q)
    assert len(W.vertices) == 7
    for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 5)):
        cell = W.cell_at(t, D.PHI_E6, D.PHI_E6_STAR)
        assert verify_certificate(D.phi_t(t), cell)
        assert cell.certificate == tuple(W.certificate_at(t))


def test_scan_flip_pair():
    r = scan_segment(A, B)
    assert r.breakpoints == [Fraction(1, 2)]
    labels = [s.label() for s in r.intervals]
    assert labels == ["0", "(0,1/2)", "1/2", "(1/2,1)", "1"]
    mid = r.tilings[Fraction(1, 2)]
    assert [C.n_vertices for C in mid.classes] == [4]
    assert r.certified
    d = r.fingerprints()
    assert d[1] != d[2] != d[3] and d[1] != d[3]


def test_scan_constant_segment():
    r = scan_segment(A, A)
    assert r.breakpoints == [] and [s.label() for s in r.intervals] == ["0", "(0,1)", "1"]
    r = scan_segment(A, A.scale(3))
    assert r.breakpoints == []


def test_validity_interval_matches_samples():
    T = build_tiling(blend(A, B, Fraction(1, 5)))
    lo, hi, closed = validity_interval(T, A, B)
    assert not closed and hi == Fraction(1, 2) and lo < 0
    for t in (Fraction(1, 10), Fraction(49, 100)):
        assert build_tiling(blend(A, B, t)).digest() == T.digest()


def test_midpoint_structure_small():
    c = midpoint_tiling_structure(A, A, Fraction(1, 3))
    assert c.by_vertex_count == {3: 1}
    c = midpoint_tiling_structure(A, B, Fraction(1, 2))
    assert c.by_vertex_count == {4: 1}


def test_circuit_triangulations_square():
    pos, neg = circuit_triangulations([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert len(pos) == len(neg) == 2
    assert {frozenset(s) for s in pos} | {frozenset(s) for s in neg} == {
        frozenset(s) for s in ([(0, 0), (1, 0), (0, 1)], [(1, 0), (0, 1), (1, 1)],
                               [(0, 0), (1, 0), (1, 1)], [(0, 0), (0, 1), (1, 1)])}


def test_refines():
    TI = build_tiling(QuadraticForm.identity(2))
    TA = build_tiling(A)
    assert refines(TA, TI) and not refines(TI, TA)
