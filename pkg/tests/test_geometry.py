from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from multitile.geometry import (
    ConvexPolygon,
    InvalidPolygon,
    Lattice2,
    Location,
    Mat2,
    SingularMatrix,
    Vec2,
    apply_linear,
    centrally_symmetric_center,
    half_lattice_points_on_segment,
    has_half_lattice_point,
    hermite_basis,
    lattice_contains,
    point_in_polygon,
    polygon_area,
    q,
    vec,
)
from multitile.multitiling import W_REGION, decagon_from_vertex, example1_octagon, octagon_alpha

from helpers import (
    CENTRED_SQUARE,
    UNIT_SQUARE,
    Z2,
    brute_area,
    brute_location,
    convex_polygons,
    lattices,
    nonsingular_matrices,
    points,
    random_unimodular,
)


def test_rationals_are_exact():
    assert q("6/4") == F(3, 2)
    assert q(3) == F(3)
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        q(True)
    with pytest.raises(TypeError):
        vec(0.1, 0)


def test_area_examples():
    assert polygon_area(UNIT_SQUARE) == 1
    assert polygon_area(example1_octagon().polygon) == 7
    assert polygon_area(octagon_alpha(F(1, 5)).polygon) == 5


@given(convex_polygons())
def test_area_matches_fan_triangulation(P):
    assert P.area == brute_area(P.vertices)
    assert P.area > 0


@given(convex_polygons(), nonsingular_matrices())
def test_area_scales_with_determinant(P, M):
    assert polygon_area(apply_linear(M, P)) == abs(M.det) * polygon_area(P)


def test_center_examples():
    assert centrally_symmetric_center(UNIT_SQUARE) == vec(F(1, 2), F(1, 2))
    assert centrally_symmetric_center(ConvexPolygon([(0, 0), (1, 0), (0, 1)])) is None
    assert centrally_symmetric_center(decagon_from_vertex(vec(F(-3, 5), F(4, 5)))) == vec(0, 0)


@given(points)
def test_center_follows_translation(t):
    P = example1_octagon().polygon
    assert centrally_symmetric_center(P.translate(t)) == t


def test_lattice_contains_examples():
    assert lattice_contains(Z2, (3, -2))
    assert not lattice_contains(Z2, (F(1, 2), 0))
    La = Lattice2((2, 0), (1 + F(1, 4), 1))
    assert lattice_contains(La, (F(5, 2), 2))


@given(lattices(), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_lattice_closed_under_integer_combinations(L, a, b, c, d):
    u, v = L.point(a, b), L.point(c, d)
    assert lattice_contains(L, u + v)
    assert lattice_contains(L, u - v * 3)


@given(lattices(), st.integers(0, 10 ** 6))
def test_hermite_form_is_basis_independent(L, seed):
    import random

    U = random_unimodular(random.Random(seed))
    a, b = L.basis
    other = Lattice2(a * U.a + b * U.c, a * U.b + b * U.d)
    assert other.hnf_basis() == L.hnf_basis()
    assert other == L
    assert abs(other.det) == abs(L.det)


def test_hermite_rejects_rank_one():
    with pytest.raises(SingularMatrix):
        hermite_basis([vec(1, 1), vec(2, 2)])
    with pytest.raises(SingularMatrix):
        Lattice2((1, 2), (2, 4))


def test_half_lattice_examples():
    a, b = vec(F(-1, 5), F(-3, 2)), vec(F(4, 5), F(-3, 2))
    assert half_lattice_points_on_segment(Z2, a, b) == [vec(0, F(-3, 2)), vec(F(1, 2), F(-3, 2))]
    assert half_lattice_points_on_segment(Z2, vec(0, 0), vec(F(1, 4), F(1, 4))) == []
    got = half_lattice_points_on_segment(Z2, vec(1, F(-3, 2)), vec(1, F(3, 2)))
    assert got == [vec(1, -1), vec(1, F(-1, 2)), vec(1, 0), vec(1, F(1, 2)), vec(1, 1)]


def _brute_half_points(L, a, b):
    """Every point of L/2 in the bounding box of the segment, filtered by exact tests."""
    import math

    corners = [L.coordinates(vec(x, y)) * 2 for x in (a.x, b.x) for y in (a.y, b.y)]
    lo = [math.floor(min(c[i] for c in corners)) for i in (0, 1)]
    hi = [math.ceil(max(c[i] for c in corners)) for i in (0, 1)]
    out = []
    for i in range(lo[0], hi[0] + 1):
        for j in range(lo[1], hi[1] + 1):
            p = L.point(i, j) / 2
            if (p - a).cross(b - a) == 0 and 0 < (p - a).dot(b - a) < (b - a).norm2():
                out.append(p)
    return out


@given(lattices(), points, points)
def test_half_lattice_points_match_brute_force(L, a, b):
    if a == b:
        return
    got = half_lattice_points_on_segment(L, a, b)
    assert has_half_lattice_point(L, a, b) == bool(got)
    for p in got:
        assert L.half_contains(p)
        assert (p - a).cross(b - a) == 0
        assert 0 < (p - a).dot(b - a) < (b - a).norm2()
    # ordered from a
    ds = [(p - a).norm2() for p in got]
    assert ds == sorted(ds)
    assert set(_brute_half_points(L, a, b)) == set(got)


def test_apply_linear_examples():
    P = example1_octagon().polygon
    assert apply_linear(Mat2.identity(), P) == P
    R = apply_linear(Mat2.of(2, 0, 0, 1), UNIT_SQUARE)
    assert R.vertices == (vec(0, 0), vec(2, 0), vec(2, 1), vec(0, 1))
    assert R.area == 2
    S = apply_linear(Mat2.of(1, 1, 0, 1), Z2)
    assert abs(S.det) == 1
    for x in range(-3, 4):
        for y in range(-3, 4):
            assert lattice_contains(S, (x, y))
    assert not lattice_contains(S, (F(1, 2), 0))
    with pytest.raises(SingularMatrix):
        apply_linear(Mat2.of(1, 2, 2, 4), P)


def test_reflection_keeps_counterclockwise_order():
    R = apply_linear(Mat2.of(-1, 0, 0, 1), UNIT_SQUARE)
    assert R.reoriented
    assert R.area == 1
    assert R.vertices[0] == vec(0, 0)


def test_point_in_polygon_examples():
    assert point_in_polygon(UNIT_SQUARE, vec(F(1, 2), F(1, 2))).location is Location.INTERIOR
    on = point_in_polygon(UNIT_SQUARE, vec(1, F(1, 2)))
    assert on.location is Location.BOUNDARY and on.edge is not None
    corner = point_in_polygon(UNIT_SQUARE, vec(1, 1))
    assert corner.location is Location.BOUNDARY and UNIT_SQUARE.vertices[corner.vertex] == vec(1, 1)
    assert point_in_polygon(W_REGION, vec(F(-3, 5), F(4, 5))).location is Location.INTERIOR
    # on two extended edge lines but outside
    assert point_in_polygon(UNIT_SQUARE, vec(2, 2)).location is Location.EXTERIOR


@given(convex_polygons(), points)
def test_point_in_polygon_matches_sign_test(P, x):
    loc = point_in_polygon(P, x)
    expected = {0: Location.EXTERIOR, 1: Location.BOUNDARY, 2: Location.INTERIOR}[brute_location(P.vertices, x)]
    assert loc.location is expected
    if expected is Location.BOUNDARY:
        assert (loc.vertex is None) != (loc.edge is None)
        if loc.vertex is not None:
            assert P.vertices[loc.vertex] == x
        else:
            a, b = P.edge(loc.edge)
            assert (b - a).cross(x - a) == 0 and x not in (a, b)


@given(convex_polygons())
def test_vertices_and_midpoints_are_on_the_boundary(P):
    for i, v in enumerate(P.vertices):
        assert point_in_polygon(P, v) == (Location.BOUNDARY, i, None)
    for i, m in enumerate(P.midpoints):
        assert point_in_polygon(P, m) == (Location.BOUNDARY, None, i)


@pytest.mark.parametrize("pts", [
    [(0, 0), (1, 0)],
    [(0, 0), (1, 0), (2, 0)],
    [(0, 0), (1, 0), (2, 0), (1, 1)],
    [(0, 0), (2, 0), (1, F(1, 2)), (1, 2)],
    [(0, 0), (1, 0), (1, 0), (0, 1)],
    [(0, 0), (2, 0), (0, 1), (2, 1)],
])
def test_invalid_polygons_rejected(pts):
    with pytest.raises(InvalidPolygon):
        ConvexPolygon(pts)


def test_clockwise_input_is_reoriented():
    P = ConvexPolygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert P.reoriented
    assert P.vertices == UNIT_SQUARE.vertices
    assert not UNIT_SQUARE.reoriented


def test_centred_square_edges():
    assert CENTRED_SQUARE.area == 1
    assert CENTRED_SQUARE.edge(0) == (CENTRED_SQUARE.vertices[-1], CENTRED_SQUARE.vertices[0])
    assert Vec2(F(1), F(2)).cross(Vec2(F(3), F(4))) == -2
