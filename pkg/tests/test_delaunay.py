import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voronoiforms import dataset as D
from voronoiforms.delaunay import (
    DegenerateVertexSet,
    DelaunayCell,
    NotDelaunay,
    RankDeficient,
    WindowOverflow,
    build_tiling,
    canonical_form,
    certify_cell,
    homology_classes,
    layers,
    perfect_vector_of_cell,
    place,
    star_at_origin,
    sublattice_section,
    verify_certificate,
)
from voronoiforms.exactgeom import invert, lower_hull, matrix
from voronoiforms.qform import NotPositiveDefinite, QuadraticForm, transform
from voronoiforms.reproduce import random_unimodular
from voronoiforms.serialize import parse_star_export, star_export

I2 = QuadraticForm.identity(2)
A2 = QuadraticForm.from_rows([[2, 1], [1, 2]])
A3 = QuadraticForm.from_rows([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])


def lifted_star(Q, radius=2):
    """Cells through the origin from the lower hull of a lifted window (brute-force oracle)."""
    n = Q.n
    window = list(itertools.product(range(-radius, radius + 1), repeat=n))
    facets = lower_hull([p + (Q(p),) for p in window])
    o = (0,) * n
    return sorted(tuple(sorted(f.points)) for f in facets if o in f.points)


def test_small_stars():
    assert sorted(len(c.vertices) for c in star_at_origin(I2).cells) == [4] * 4
    s = star_at_origin(A2)
    assert sorted(len(c.vertices) for c in s.cells) == [3] * 6
    assert sorted(c.vertices for c in s.cells) == lifted_star(A2)
    s3 = star_at_origin(A3)
    assert sorted(c.vertices for c in s3.cells) == lifted_star(A3)


def test_cell_classes_a3():
    T = build_tiling(A3)
    assert sorted(C.n_vertices for C in T.classes) in ([4, 4, 6], [4, 6])
    s = T.star()
    assert s.vertex_counts() == {4: 8, 6: 6}


def test_certify_cell():
    c = certify_cell(I2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert c.certificate == (0, (-1, -1))
    with pytest.raises(NotDelaunay):
        certify_cell(I2, [(0, 0), (2, 0), (0, 2)])
    with pytest.raises(DegenerateVertexSet):
        certify_cell(I2, [(0, 0), (1, 0)])
    c = certify_cell(D.PHI_E6, D.G_VERTICES)
    assert verify_certificate(D.PHI_E6, c)
    p1 = D.P_1
    short, long = layers(c, D.PHI_E6)
    assert all(sum(a * b for a, b in zip(p1, s)) == 1 for s in short)
    assert all(sum(a * b for a, b in zip(p1, l)) == 2 for l in long)


def test_reference_r_tope_at_its_breakpoint():
    # the R-tope is a Delaunay cell exactly where its functional vanishes (t = 2/3 here)
    c = certify_cell(D.phi_t(Fraction(2, 3)), D.R_VERTICES)
    assert verify_certificate(D.phi_t(Fraction(2, 3)), c)
    with pytest.raises(NotDelaunay):
        certify_cell(D.phi_t(Fraction(1, 2)), D.R_VERTICES)


def test_window_cap():
    with pytest.raises(WindowOverflow):
        build_tiling(D.PHI_E6, window_cap=Fraction(1, 10))


def test_non_pd():
    with pytest.raises(NotPositiveDefinite):
        star_at_origin(QuadraticForm.from_rows([[1, 2], [2, 1]]))


def test_homology():
    assert len(homology_classes(star_at_origin(I2))) == 1
    s = star_at_origin(D.PHI_E6_STAR)
    assert len(homology_classes(s)) == 40 and set(s.vertex_counts()) == {9}


def test_e6_star():
    s = star_at_origin(D.PHI_E6)
    assert len(s) == 54 and set(s.vertex_counts()) == {27}
    # G and -G are homologous, and all 54 cells are translates of G or -G
    assert len(homology_classes(s)) == 1


def test_inversion_symmetry():
    for Q in (A2, A3, D.PHI_E6):
        cells = {c.vertices for c in star_at_origin(Q).cells}
        assert {tuple(sorted(tuple(-x for x in v) for v in c)) for c in cells} == cells


def test_canonical_form():
    V = [(3, 1), (4, 1), (3, 2)]
    key, s, z = canonical_form(V)
    assert place(key, s, z) == tuple(sorted(V))
    assert canonical_form([tuple(-x + 5 for x in v) for v in V])[0] == key


def test_layers_and_perfect_vectors():
    sq = certify_cell(I2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert layers(sq, I2) == (frozenset({(1, 0), (0, 1)}), frozenset({(1, 1)}))
    g = certify_cell(D.PHI_E6, D.G_VERTICES)
    assert perfect_vector_of_cell(g, D.P_E6_STAR_VECTORS, D.PHI_E6) == {D.P_1}
    gs = certify_cell(D.PHI_E6_STAR, D.G_STAR_VERTICES)
    assert {D.PHI_E6_STAR(v) for v in gs.vertices if any(v)} == {D.M, Fraction(3, 2) * D.M}
    bogus = DelaunayCell(((0,) * 6, (5, 0, 0, 0, 0, 0)), None, 6)
    assert perfect_vector_of_cell(bogus, D.P_E6_STAR_VECTORS, D.PHI_E6) == frozenset()


def test_shared_facet_has_two_perfect_vectors():
    s = star_at_origin(D.PHI_E6)
    o = (0,) * 6
    for i, j in s.adjacency:
        F = set(s.cells[i].vertices) & set(s.cells[j].vertices)
        if o in F:
            face = DelaunayCell(tuple(sorted(F)), None, 6)
            got = perfect_vector_of_cell(face, D.P_E6_STAR_VECTORS, D.PHI_E6)
            pi = perfect_vector_of_cell(s.cells[i], D.P_E6_STAR_VECTORS, D.PHI_E6)
            pj = perfect_vector_of_cell(s.cells[j], D.P_E6_STAR_VECTORS, D.PHI_E6)
            assert got == pi | pj and len(got) == 2
            return
    pytest.fail("no facet through the origin")


def test_sublattice_section():
    basis, R = sublattice_section(QuadraticForm.identity(3), [(0, 0, 1), (0, 0, -1)])
    assert R == QuadraticForm.identity(2)
    basis, R = sublattice_section(D.PHI_E6, D.P1)
    from voronoiforms.qform import minima
    assert len(basis) == 4 and len(minima(R).minimal_vectors) == 24
    faces = star_at_origin(R).faces_at_origin()
    assert (faces[1], faces[2], faces[3]) == (24, 96, 96) and len(star_at_origin(R)) == 24
    with pytest.raises(RankDeficient):
        sublattice_section(I2, [(1, 0), (0, 1)])


def test_star_export_roundtrip():
    s = star_at_origin(A3)
    parsed = parse_star_export(star_export(s))
    assert parsed == [(c.vertices, c.certificate) for c in s.cells]


def test_locate():
    T = build_tiling(A2)
    x = (Fraction(7, 3), Fraction(-5, 4))
    cell = T.cell(*T.locate(x))
    assert cell.polytope.contains(x)


# --- property suites --------------------------------------------------------


@settings(max_examples=12, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_certificates_and_facet_pairing(n, seed):
    from voronoiforms.reproduce import random_form

    Q = random_form(random.Random(seed), n)
    s = star_at_origin(Q)
    o = (0,) * n
    count = {}
    for c in s.cells:
        assert verify_certificate(Q, c)
        for a, b in c.polytope.inequalities:
            F = frozenset(v for v in c.vertices if sum(x * y for x, y in zip(a, v)) == b)
            if o in F:
                count[F] = count.get(F, 0) + 1
    assert set(count.values()) == {2}


@settings(max_examples=12, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_transform_equivariance(n, seed):
    from voronoiforms.reproduce import random_form

    rng = random.Random(seed)
    Q = random_form(rng, n)
    U = random_unimodular(rng, n)
    Ui = invert(matrix(U))
    a = sorted(tuple(sorted(tuple(int(x) for x in Ui @ v) for v in c.vertices)) for c in star_at_origin(Q).cells)
    b = sorted(c.vertices for c in star_at_origin(transform(Q, U)).cells)
    assert a == b


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_lifting_consistency_2d(seed):
    from voronoiforms.reproduce import random_form

    Q = random_form(random.Random(seed), 2)
    cells = sorted(c.vertices for c in star_at_origin(Q).cells)
    # every cell of the window's lower hull through the origin is a Delaunay cell once the
    # window covers the star's neighbours
    r = max(abs(x) for c in cells for v in c for x in v) * 2
    assert cells == lifted_star(Q, radius=r)
