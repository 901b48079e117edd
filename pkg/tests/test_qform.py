import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voronoiforms import dataset as D
from voronoiforms.exactgeom import RationalMatrix
from voronoiforms.ltype import repartitioning_functional
from voronoiforms.qform import (
    DimensionMismatch,
    NotEutactic,
    NotMember,
    NotPositiveDefinite,
    NotUnimodular,
    ParseError,
    QuadraticForm,
    dual,
    enumerate_ellipsoid,
    eutaxy,
    evaluate,
    format_form,
    integer_range,
    is_perfect,
    minima,
    parse_form,
    perfect_cone_membership,
    rank_one,
    trace_product,
    transform,
)

A2 = QuadraticForm.from_rows([[2, 1], [1, 2]])
M = D.M


def test_evaluate():
    assert evaluate(QuadraticForm.identity(2), (1, 0)) == 1
    assert evaluate(D.PI_E6, (0, 1, 0, 0, 0, 0)) == 2
    assert evaluate(D.PHI_E6, (2, -1, 1, 1, 1, 1)) == 2 * M
    with pytest.raises(DimensionMismatch):
        evaluate(A2, (1, 0, 0))


def test_trace_product():
    assert trace_product(QuadraticForm.identity(6), QuadraticForm.identity(6)) == 6
    piP = D.PI_E6_STAR - D.PI_E6
    assert trace_product(piP, D.PHI_E6) == -Fraction(2, 8) * M * M
    assert trace_product(piP, D.PHI_E6_STAR) == Fraction(3, 8) * M * M
    with pytest.raises(DimensionMismatch):
        trace_product(A2, QuadraticForm.identity(3))


def test_trace_product_r_functional_values():
    # stated values are -m/2 and +m/2; the functional built from V_G, V_Q gives -m and +m/2
    piR = repartitioning_functional(D.V_G, D.V_Q).form
    assert trace_product(piR, D.PHI_E6) == -M
    assert trace_product(piR, D.PHI_E6_STAR) == M / 2


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)))
def test_duality_pairing(p):
    Q = QuadraticForm.from_rows([[3, 1, 0], [1, 2, -1], [0, -1, 4]])
    assert trace_product(rank_one(p), Q) == evaluate(Q, p)


def test_dual():
    assert dual(QuadraticForm.identity(3)) == QuadraticForm.identity(3)
    Q = QuadraticForm.from_rows([[4, 1, 0, 1], [1, 3, 1, 0], [0, 1, 5, 2], [1, 0, 2, 6]])
    assert dual(dual(Q)) == Q
    assert D.F_E6 @ D.P_E6_STAR == RationalMatrix.identity(6).scale(Fraction(3, 8) * M * M)


def test_transform():
    assert transform(A2, RationalMatrix.identity(2)) == A2
    assert transform(D.PI_E6, D.U_STAR) == D.PHI_E6
    assert transform(D.PI_E6_STAR, D.U_STAR) == D.PHI_E6_STAR
    with pytest.raises(NotUnimodular):
        transform(A2, [[2, 0], [0, 1]])


def test_integer_range():
    # integers x with (x - c)^2 <= r
    assert integer_range(Fraction(1, 2), Fraction(1, 4)) == (0, 1)
    assert integer_range(Fraction(0), Fraction(4)) == (-2, 2)
    assert integer_range(Fraction(1, 3), Fraction(1)) == (0, 1)


def brute_values(Q, B):
    out = {}
    for x in itertools.product(range(-B, B + 1), repeat=Q.n):
        if any(x):
            out.setdefault(evaluate(Q, x), set()).add(x)
    return out


def test_minima_examples():
    r = minima(QuadraticForm.identity(2))
    assert r.min_value == 1 and len(r.minimal_vectors) == 4
    assert r.second_min == 2 and len(r.long_vectors) == 4
    r = minima(D.PI_E6)
    assert r.minimal_vectors == D.P_E6_VECTORS and len(r.minimal_vectors) == 72
    r = minima(D.PI_E6_STAR)
    assert r.minimal_vectors == D.P_E6_STAR_VECTORS and len(r.minimal_vectors) == 54
    assert len(minima(D.PHI_E6).long_vectors) == 270 and minima(D.PHI_E6).second_min == 2 * M
    r = minima(D.PHI_E6_STAR)
    assert len(r.long_vectors) == 72 and r.second_min == Fraction(3, 2) * M
    with pytest.raises(NotPositiveDefinite):
        minima(QuadraticForm.from_rows([[1, 2], [2, 1]]))


pd_forms = st.tuples(st.integers(1, 4), st.integers(-2, 2), st.integers(1, 4), st.integers(-2, 2),
                     st.integers(-2, 2), st.integers(1, 4)).map(
    lambda t: QuadraticForm.from_rows([[t[0] + 2, t[1], t[3]], [t[1], t[2] + 2, t[4]], [t[3], t[4], t[5] + 2]]))


@settings(max_examples=30, deadline=None)
@given(pd_forms)
def test_minima_completeness(Q):
    if not Q.is_positive_definite():
        return
    r = minima(Q)
    vals = brute_values(Q, 3)
    # every vector of value <= second minimum has coordinates within [-3, 3] for these small forms
    small = {v for v in vals if v <= r.second_min}
    assert min(vals) == r.min_value
    assert vals[r.min_value] == set(r.minimal_vectors)
    assert sorted(small)[1] == r.second_min and vals[r.second_min] == set(r.long_vectors)
    assert set(z for z, _ in enumerate_ellipsoid(Q, r.min_value)) - {(0, 0, 0)} == set(r.minimal_vectors)


@settings(max_examples=20, deadline=None)
@given(pd_forms, st.integers(0, 10 ** 6))
def test_minima_transform_invariance(Q, seed):
    import random

    from voronoiforms.exactgeom import invert
    from voronoiforms.reproduce import random_unimodular

    if not Q.is_positive_definite():
        return
    U = random_unimodular(random.Random(seed), 3)
    Qu = transform(Q, U)
    r, ru = minima(Q), minima(Qu)
    Ui = invert(U)
    assert r.min_value == ru.min_value
    assert {tuple(int(x) for x in Ui @ v) for v in r.minimal_vectors} == set(ru.minimal_vectors)


def test_perfection():
    assert not is_perfect(QuadraticForm.identity(3))
    c = is_perfect(A2)
    assert c and c.rank == 3 == c.dimension
    for Q in (D.PI_E6, D.PI_E6_STAR):
        c = is_perfect(Q)
        assert c and c.rank == 21


def test_eutaxy():
    e = eutaxy(QuadraticForm.identity(3))
    assert set(e.weights.values()) == {1}
    with pytest.raises(NotEutactic):
        eutaxy(QuadraticForm.from_rows([[1, 0], [0, 2]]))
    for Q in (A2, D.PI_E6, D.PI_E6_STAR):
        e = eutaxy(Q)
        assert e.reassemble() == dual(Q).gram
        assert all(w > 0 for w in e.weights.values())
        assert e.is_uniform()


def test_eutaxy_identities_scale_free():
    assert D.P_E6 == D.sum_rank_one(D.S_E6_STAR, M / 12)
    assert D.P_E6_STAR == D.sum_rank_one(D.S_E6, M / 16)


def test_perfect_cone_membership():
    w = perfect_cone_membership(rank_one((1, 2)), {(1, 2), (-1, -2)})
    assert w == {(1, 2): 1}
    w = perfect_cone_membership(D.PHI_E6, D.P_E6_STAR_VECTORS)
    assert set(w.values()) == {M / 12}
    with pytest.raises(NotMember):
        perfect_cone_membership(D.PHI_E6, D.P_E6_VECTORS)


def test_form_file_roundtrip():
    for Q in (A2, D.PHI_E6_STAR):
        assert parse_form(format_form(Q)) == Q
    assert parse_form("2\n1/2 0\n0 3\n") == QuadraticForm.from_rows([[Fraction(1, 2), 0], [0, 3]])
    for bad in ("2\n1 2\n3 1\n", "2\n1 0\n", "x\n", "2\n1 a\n0 1\n"):
        with pytest.raises(ParseError):
            parse_form(bad)
