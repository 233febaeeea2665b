"""Shared fixtures, generators and independent brute-force oracles for the tests."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from hypothesis import strategies as st

from multitile.geometry import ConvexPolygon, InvalidPolygon, Lattice2, Mat2, Vec2, vec
from multitile import multitiling as mt
from multitile.classifier import canonical_cycle

F = Fraction

UNIT_SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
CENTRED_SQUARE = ConvexPolygon([(F(-1, 2), F(-1, 2)), (F(1, 2), F(-1, 2)), (F(1, 2), F(1, 2)), (F(-1, 2), F(1, 2))])
Z2 = Lattice2.integer()

DECAGON_VERTICES = [(F(-3, 5), F(4, 5)), (F(-5, 8), F(7, 9)), (F(-11, 20), F(17, 20)),
                    (F(-2, 3), F(3, 4)), (F(-3, 5), F(3, 4)), (F(-13, 20), F(3, 4))]


def shipped_instances() -> list[mt.MultiTilingInstance]:
    """The seven-fold octagon plus representative members of every five-fold family."""
    out = [mt.example1_octagon()]
    out += [mt.octagon_alpha(a) for a in (F(1, 20), F(1, 8), F(1, 5), F(23, 100))]
    out += [mt.octagon_beta(b) for b in (F(26, 100), F(3, 10), F(33, 100) - F(1, 1000))]
    out += [mt.octagon_alpha_prime(a) for a in (F(1, 10), F(1, 3), F(3, 5))]
    out += [mt.octagon_beta_prime(b) for b in (F(1, 4), F(1, 2), F(1))]
    out += [mt.decagon_instance(v) for v in DECAGON_VERTICES]
    return out


# -- independent oracles ----------------------------------------------------


def brute_location(vertices, x) -> int:
    """0 exterior, 1 boundary, 2 interior; plain sign test on every edge."""
    n = len(vertices)
    signs = []
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        signs.append((b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]))
    if any(s < 0 for s in signs):
        return 0
    return 2 if all(s > 0 for s in signs) else 1


def brute_area(vertices) -> Fraction:
    """Fan triangulation from the first vertex."""
    a = vertices[0]
    tot = F(0)
    for b, c in zip(vertices[1:], vertices[2:]):
        tot += ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2
    return abs(tot)


def brute_cover(P: ConvexPolygon, L: Lattice2, x, radius: int = 0) -> tuple[int, int]:
    """Count translates P + l containing x by scanning a generous box of lattice coordinates."""
    if radius == 0:
        reach = max(max(abs(c) for c in v) for v in P.vertices) + max(abs(x[0]), abs(x[1])) + 1
        inv = L.coordinates
        corners = [inv(vec(sx * reach, sy * reach)) for sx in (-1, 1) for sy in (-1, 1)]
        radius = math.ceil(max(max(abs(c.x), abs(c.y)) for c in corners)) + 1
    inner = edge = 0
    for i in range(-radius, radius + 1):
        for j in range(-radius, radius + 1):
            t = L.point(i, j)
            k = brute_location(P.vertices, (x[0] - t.x, x[1] - t.y))
            inner += k == 2
            edge += k == 1
    return inner, edge


# -- random generators ------------------------------------------------------


def random_lattice(rng: random.Random, max_det: Fraction = F(2)) -> Lattice2:
    while True:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        s = F(1, rng.choice([1, 2]))
        det = abs(a * d - b * c) * s * s
        if 0 < det <= max_det:
            return Lattice2(vec(a * s, c * s), vec(b * s, d * s))


def random_cs_polygon(rng: random.Random, L: Lattice2, n: int, lattice_bias: float = 0.75) -> ConvexPolygon:
    """Centrally symmetric n-gon with coordinates over 1/8.

    Edges are mostly lattice vectors so that a good share of the samples are
    multiple lattice tiles; the rest are arbitrary eighths.
    """
    m = n // 2
    while True:
        edges = []
        for _ in range(m):
            if rng.random() < lattice_bias:
                e = L.point(rng.randint(-2, 2), rng.randint(-2, 2))
            else:
                e = vec(F(rng.randint(-16, 16), rng.choice([1, 2, 4, 8])),
                        F(rng.randint(-16, 16), rng.choice([1, 2, 4, 8])))
            if e.y < 0 or (e.y == 0 and e.x < 0):
                e = -e
            edges.append(e)
        if any(e.is_zero() for e in edges):
            continue
        edges.sort(key=lambda e: math.atan2(e.y, e.x))
        if not all(edges[i].cross(edges[i + 1]) > 0 for i in range(m - 1)):
            continue
        pts, p = [], vec(0, 0)
        for e in edges + [-e for e in edges]:
            pts.append(p)
            p = p + e
        try:
            P = ConvexPolygon(pts)
        except InvalidPolygon:
            continue
        shift = vec(F(rng.randint(0, 7), 8), F(rng.randint(0, 7), 8))
        return P.translate(shift)


def random_nonsingular(rng: random.Random, bound: int = 5) -> Mat2:
    while True:
        M = Mat2.of(*(F(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(4)))
        if not M.is_singular():
            return M


def random_unimodular(rng: random.Random, steps: int = 4) -> Mat2:
    M = Mat2.identity()
    gens = [Mat2.of(1, 1, 0, 1), Mat2.of(1, -1, 0, 1), Mat2.of(1, 0, 1, 1), Mat2.of(1, 0, -1, 1),
            Mat2.of(0, 1, 1, 0), Mat2.of(-1, 0, 0, 1)]
    for _ in range(steps):
        M = M @ rng.choice(gens)
    return M


# -- hypothesis strategies --------------------------------------------------

small_rationals = st.builds(lambda p, q: F(p, q), st.integers(-40, 40), st.sampled_from([1, 2, 3, 4, 5, 8]))
points = st.builds(vec, small_rationals, small_rationals)


@st.composite
def nonsingular_matrices(draw):
    entries = draw(st.lists(small_rationals, min_size=4, max_size=4))
    M = Mat2.of(*entries)
    if M.is_singular():
        M = Mat2.of(1, entries[1], 0, 1)
    return M


@st.composite
def lattices(draw):
    return random_lattice(random.Random(draw(st.integers(0, 10 ** 6))))


@st.composite
def cs_polygons(draw, n=None):
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    k = n if n is not None else rng.choice([4, 6, 8])
    return random_cs_polygon(rng, Z2, k, lattice_bias=0.5)


@st.composite
def convex_polygons(draw):
    """Convex hulls of random small point sets with at least three vertices."""
    pts = draw(st.lists(points, min_size=3, max_size=9, unique=True))
    hull = convex_hull(pts)
    if len(hull) < 3:
        hull = [vec(0, 0), vec(1, 0), vec(0, 1)]
    return ConvexPolygon(hull)


def convex_hull(pts):
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and (out[-1] - out[-2]).cross(p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def wheel_minkowski_count(P: ConvexPolygon, L: Lattice2, r) -> int:
    """Independent patch size: lattice points of window + (-P), a convex hull."""
    r = F(r)
    corners = [vec(sx * r, sy * r) for sx in (-1, 1) for sy in (-1, 1)]
    hull = convex_hull([c - v for c in corners for v in P.vertices])
    reach = max(max(abs(p.x), abs(p.y)) for p in hull)
    zs = [L.coordinates(vec(sx * reach, sy * reach)) for sx in (-1, 1) for sy in (-1, 1)]
    R = math.ceil(max(max(abs(z.x), abs(z.y)) for z in zs)) + 1
    return sum(brute_location(hull, L.point(i, j)) > 0 for i in range(-R, R + 1) for j in range(-R, R + 1))


def angle_valid_cycles():
    """All cyclic sequences whose regular-polygon angles fill the full turn.

    Each angle is at least pi/3, so at most six polygons meet. Multisets are
    enumerated in non-decreasing order with the last entry solved for, then
    every arrangement of each multiset is kept.
    """
    bags = []

    def extend(prefix, remaining):
        lo = prefix[-1] if prefix else 3
        if len(prefix) >= 2 and 0 < remaining < 1:
            s = F(2) / (1 - remaining)
            if s.denominator == 1 and s >= lo:
                bags.append(prefix + (int(s),))
        if len(prefix) < 5:
            for s in range(lo, 43):
                a = 1 - F(2, s)
                if 2 * a > remaining:
                    break
                extend(prefix + (s,), remaining - a)

    extend((), F(2))
    return {canonical_cycle(p) for bag in bags for p in itertools.permutations(bag)}
