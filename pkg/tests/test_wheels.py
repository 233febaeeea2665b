import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from multitile.geometry import ConvexPolygon, Lattice2, Location, vec
from multitile.multitiling import decagon_instance, example1_octagon, octagon_beta_prime
from multitile.oracle import covering_multiplicity_at
from multitile.wheels import (
    MarginViolation,
    VertexStar,
    Window,
    WindowTooSmall,
    build_patch,
    check_equation2,
    partition_wheels,
    reduced_basis,
    vertex_star,
    wheel_report,
)

from helpers import CENTRED_SQUARE, Z2, shipped_instances, wheel_minkowski_count

HEXAGON = ConvexPolygon([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
HEX_LATTICE = Lattice2((2, 1), (1, 2))
DEC = decagon_instance((F(-3, 5), F(4, 5)))


def test_unit_square_patch():
    patch = build_patch(CENTRED_SQUARE, Z2, Window.square(2))
    assert len(patch.translations) == 25
    assert patch.claimed_fold == 1
    star = vertex_star(patch, (F(1, 2), F(1, 2)))
    assert len(star.boundary_members) == 4 and star.interior_count == 0
    wheels = partition_wheels(star, CENTRED_SQUARE)
    assert len(wheels) == 1
    assert len(wheels[0].members) == 4 and wheels[0].winding == 1


def test_hexagon_vertex_single_wheel():
    assert HEXAGON.area == HEX_LATTICE.det == 3
    patch = build_patch(HEXAGON, HEX_LATTICE, Window.square(5))
    assert patch.claimed_fold == 1
    star = vertex_star(patch, (1, 0))
    wheels = partition_wheels(star, HEXAGON)
    assert [(len(w.members), w.winding) for w in wheels] == [(3, 1)]
    assert check_equation2(patch).passed


@pytest.mark.parametrize("inst", [DEC, example1_octagon(), octagon_beta_prime(1)], ids=["decagon", "ex1", "octBp1"])
def test_patch_size_matches_minkowski_count(inst):
    patch = build_patch(inst.polygon, inst.lattice, Window.square(4))
    assert len(patch.translations) == wheel_minkowski_count(inst.polygon, inst.lattice, 4)
    assert len(set(patch.translations)) == len(patch.translations)


def test_decagon_patch_and_vertex():
    patch = build_patch(DEC.polygon, Z2, Window.square(4))
    assert patch.claimed_fold == 5
    rep = wheel_report(patch, DEC.polygon.vertices[0])
    assert rep.phi + rep.varphi == 5 and rep.eq2_holds
    assert sum(w.winding for w in rep.wheels) == rep.phi


def test_example1_every_vertex_gives_seven():
    patch = build_patch(example1_octagon().polygon, Z2, Window.square(3))
    assert patch.claimed_fold == 7
    for v in patch.vertices:
        if patch.window.contains(v):
            r = wheel_report(patch, v)
            assert r.phi + r.varphi == 7


def test_equation2_examples():
    ex = check_equation2(build_patch(example1_octagon().polygon, Z2, Window.square(4)))
    assert ex.passed and ex.fold == 7 and ex.checked > 0
    bp = octagon_beta_prime(1)
    rep = check_equation2(build_patch(bp.polygon, bp.lattice, Window.square(4)))
    assert rep.passed and rep.fold == 5


def test_fault_injection_is_flagged():
    patch = build_patch(example1_octagon().polygon, Z2, Window.square(4))
    hole = patch.without(vec(0, 0))
    rep = check_equation2(hole)
    assert not rep.passed
    # every violation is a vertex of the removed translate region
    for v, varphi, phi in rep.violations:
        assert covering_multiplicity_at(patch.polygon, Z2, v)[0] + covering_multiplicity_at(patch.polygon, Z2, v)[1] >= 1
        assert max(abs(v.x), abs(v.y)) <= F(3, 2)


def test_wrong_claimed_fold_is_flagged():
    inst = example1_octagon()
    patch = build_patch(inst.polygon, Z2, Window.square(4), claimed_fold=6)
    assert not check_equation2(patch).passed


def test_window_checks():
    with pytest.raises(WindowTooSmall):
        build_patch(CENTRED_SQUARE, Lattice2((2, 0), (0, 2)), Window.square(2))
    patch = build_patch(CENTRED_SQUARE, Z2, Window.square(2))
    with pytest.raises(MarginViolation):
        vertex_star(patch, (F(5, 2), F(1, 2)))


def test_reduced_basis():
    a, b = reduced_basis(Lattice2((1, 0), (7, 1)))
    assert {a, b} <= {vec(1, 0), vec(0, 1), vec(-1, 0), vec(0, -1)}
    a, b = reduced_basis(Lattice2((3, 1), (5, 2)))
    assert abs(a.cross(b)) == 1 and a.norm2() <= b.norm2()


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_wheel_partition_properties(seed):
    rng = random.Random(seed)
    inst = rng.choice(shipped_instances())
    patch = build_patch(inst.polygon, inst.lattice, Window.square(3))
    v = rng.choice([p for p in patch.vertices if patch.window.contains(p)])
    star = vertex_star(patch, v)
    wheels = partition_wheels(star, inst.polygon)
    assert sum(len(w.members) for w in wheels) == len(star.boundary_members)
    assert all(w.winding >= 1 for w in wheels)
    inner, edge = covering_multiplicity_at(inst.polygon, inst.lattice, v)
    assert (star.interior_count, len(star.boundary_members)) == (inner, edge)
    # the partition does not depend on member order
    shuffled = list(star.boundary_members)
    rng.shuffle(shuffled)
    again = partition_wheels(VertexStar(star.vertex, tuple(shuffled), star.interior_count), inst.polygon)
    assert sorted(w.winding for w in again) == sorted(w.winding for w in wheels)
    assert sum(w.winding for w in wheels) + star.interior_count == inst.fold


def test_edge_member_counts_as_straight_angle():
    patch = build_patch(CENTRED_SQUARE, Z2, Window.square(2))
    star = vertex_star(patch, (F(1, 2), 0))
    kinds = sorted(loc.vertex is None for _, loc in star.boundary_members)
    assert kinds == [True, True]
    (w,) = partition_wheels(star, CENTRED_SQUARE)
    assert w.winding == 1
    assert all(loc.location is Location.BOUNDARY for _, loc in star.boundary_members)


def test_report_dict():
    d = check_equation2(build_patch(CENTRED_SQUARE, Z2, Window.square(2))).to_dict()
    assert d["passed"] and d["fold"] == 1
    assert d["histogram"] == [{"varphi": 0, "phi": 1, "count": d["checked"]}]
