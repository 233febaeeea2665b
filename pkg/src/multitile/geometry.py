"""Exact rational plane geometry: vectors, 2x2 matrices, convex polygons, lattices.

Every coordinate is a :class:`fractions.Fraction`; no decision in this module
ever touches a float.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction, str]


class SingularMatrix(ValueError):
    pass


class InvalidPolygon(ValueError):
    pass


def q(value: Number) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction (floats refused)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    return Fraction(value)


class Vec2(NamedTuple):
    """A point or displacement with exact coordinates.

    Points and vectors share one type; ``p - q`` of two points is the vector
    joining them. Tuple ordering gives the lexicographic order used for
    deterministic tie-breaks.
    """

    x: Fraction
    y: Fraction

    def __add__(self, other: "Vec2") -> "Vec2":  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other[0], self.y - other[1])

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __mul__(self, k) -> "Vec2":  # type: ignore[override]
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Vec2":
        return Vec2(self.x / k, self.y / k)

    def dot(self, other: "Vec2") -> Fraction:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other: "Vec2") -> Fraction:
        return self.x * other[1] - self.y * other[0]

    def norm2(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


Point2 = Vec2
ORIGIN = Vec2(Fraction(0), Fraction(0))


def vec(x: Number, y: Number) -> Vec2:
    return Vec2(q(x), q(y))


def as_vec(p) -> Vec2:
    if isinstance(p, Vec2) and isinstance(p.x, Fraction) and isinstance(p.y, Fraction):
        return p
    x, y = p
    return vec(x, y)


def direction_half(d: Vec2) -> int:
    """0 for directions with angle in [0, pi), 1 for [pi, 2*pi)."""
    return 0 if (d.y > 0 or (d.y == 0 and d.x > 0)) else 1


def ccw_before(a: Vec2, b: Vec2) -> bool:
    """True if direction ``a`` has a strictly smaller polar angle in [0, 2*pi) than ``b``."""
    ha, hb = direction_half(a), direction_half(b)
    if ha != hb:
        return ha < hb
    return a.cross(b) > 0


def same_direction(a: Vec2, b: Vec2) -> bool:
    return a.cross(b) == 0 and a.dot(b) > 0


class Mat2(NamedTuple):
    """Row-major 2x2 matrix ``[[a, b], [c, d]]``."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def of(cls, a: Number, b: Number, c: Number, d: Number) -> "Mat2":
        return cls(q(a), q(b), q(c), q(d))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls.of(1, 0, 0, 1)

    @classmethod
    def from_columns(cls, u: Vec2, v: Vec2) -> "Mat2":
        return cls(u.x, v.x, u.y, v.y)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def is_singular(self) -> bool:
        return self.det == 0

    def inverse(self) -> "Mat2":
        det = self.det
        if det == 0:
            raise SingularMatrix("matrix is singular")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def _signed_area2(pts: Sequence[Vec2]) -> Fraction:
    total = Fraction(0)
    n = len(pts)
    for i in range(n):
        total += pts[i - 1].cross(pts[i])
    return total


class ConvexPolygon:
    """A strictly convex polygon with exact vertices, stored counterclockwise.

    Clockwise input is reversed (keeping the first vertex first) and
    ``reoriented`` is set. Collinear consecutive vertices, repeated vertices
    and self-winding vertex chains are rejected.

    Edge ``i`` joins ``vertices[i - 1]`` and ``vertices[i]``, so edge 0 closes
    the chain from the last vertex back to the first.
    """

    __slots__ = ("vertices", "reoriented", "__dict__")

    def __init__(self, vertices: Iterable, *, reoriented: bool = False):
        pts = tuple(as_vec(p) for p in vertices)
        if len(pts) < 3:
            raise InvalidPolygon("a polygon needs at least 3 vertices")
        area2 = _signed_area2(pts)
        if area2 == 0:
            raise InvalidPolygon("degenerate polygon (zero area)")
        if area2 < 0:
            pts = (pts[0],) + tuple(reversed(pts[1:]))
            reoriented = True
        n = len(pts)
        edges = [pts[i] - pts[i - 1] for i in range(n)]
        for i in range(n):
            if edges[i].is_zero():
                raise InvalidPolygon(f"repeated vertex at index {i}")
        for i in range(n):
            turn = edges[i].cross(edges[(i + 1) % n])
            if turn == 0:
                raise InvalidPolygon(f"collinear vertices around index {i}")
            if turn < 0:
                raise InvalidPolygon(f"reflex vertex at index {i}")
        # all left turns but winding twice (pentagram-like chains)
        wraps = sum(1 for i in range(n) if not ccw_before(edges[i - 1], edges[i]))
        if wraps != 1:
            raise InvalidPolygon("vertex chain winds more than once")
        self.vertices: tuple[Vec2, ...] = pts
        self.reoriented = reoriented

    def __repr__(self) -> str:
        pts = ", ".join(f"({p.x}, {p.y})" for p in self.vertices)
        return f"ConvexPolygon([{pts}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def edge_vectors(self) -> tuple[Vec2, ...]:
        v = self.vertices
        return tuple(v[i] - v[i - 1] for i in range(len(v)))

    def edge(self, i: int) -> tuple[Vec2, Vec2]:
        return self.vertices[i - 1], self.vertices[i]

    @cached_property
    def midpoints(self) -> tuple[Vec2, ...]:
        v = self.vertices
        return tuple((v[i - 1] + v[i]) / 2 for i in range(len(v)))

    @cached_property
    def area(self) -> Fraction:
        return _signed_area2(self.vertices) / 2

    @cached_property
    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, t: Vec2) -> "ConvexPolygon":
        return ConvexPolygon([p + t for p in self.vertices])

    def rotated_labels(self, offset: int) -> "ConvexPolygon":
        """Same polygon, vertex list started at ``offset``."""
        v = self.vertices
        return ConvexPolygon(v[offset:] + v[:offset])

    def circumdiameter(self) -> float:
        v = self.vertices
        return math.sqrt(max(float((a - b).norm2()) for a in v for b in v))


def polygon_area(P: ConvexPolygon) -> Fraction:
    return P.area


def centrally_symmetric_center(P: ConvexPolygon):
    """Return the symmetry center of ``P`` or ``None``."""
    v = P.vertices
    n = len(v)
    if n % 2:
        return None
    h = n // 2
    c = (v[0] + v[h]) / 2
    for i in range(h):
        # vertex order is cyclic, so the antipode of v_i is v_{i+n/2}
        if v[i] + v[i + h] != c * 2:
            return None
    return c


def is_centrally_symmetric(P: ConvexPolygon) -> bool:
    return centrally_symmetric_center(P) is not None


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class PointLocation(NamedTuple):
    location: Location
    vertex: int | None = None
    edge: int | None = None

    @property
    def on_vertex(self) -> bool:
        return self.vertex is not None


def point_in_polygon(P: ConvexPolygon, x: Vec2) -> PointLocation:
    """Classify ``x`` against ``P``.

    On the boundary, ``vertex`` holds the index of the vertex hit, otherwise
    ``edge`` the index of the edge whose relative interior contains ``x``.
    """
    v = P.vertices
    on_edge = None
    for i in range(len(v)):
        a, b = v[i - 1], v[i]
        s = (b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x)
        if s < 0:
            return PointLocation(Location.EXTERIOR)
        if s == 0 and on_edge is None:
            on_edge = i
    if on_edge is None:
        return PointLocation(Location.INTERIOR)
    # inside every closed half-plane and on the line of edge ``on_edge``
    n = len(v)
    for j in (on_edge % n, (on_edge - 1) % n):
        if v[j] == x:
            return PointLocation(Location.BOUNDARY, vertex=j)
    return PointLocation(Location.BOUNDARY, edge=on_edge)


class Lattice2:
    """The lattice of integer combinations of two independent rational vectors."""

    __slots__ = ("basis", "matrix", "_inv")

    def __init__(self, a1, a2):
        a1, a2 = as_vec(a1), as_vec(a2)
        m = Mat2.from_columns(a1, a2)
        if m.det == 0:
            raise SingularMatrix("lattice basis vectors are linearly dependent")
        self.basis: tuple[Vec2, Vec2] = (a1, a2)
        self.matrix = m
        self._inv = m.inverse()

    @classmethod
    def integer(cls) -> "Lattice2":
        return cls(vec(1, 0), vec(0, 1))

    def __repr__(self) -> str:
        a, b = self.basis
        return f"Lattice2(({a.x}, {a.y}), ({b.x}, {b.y}))"

    @property
    def det(self) -> Fraction:
        return abs(self.matrix.det)

    def coordinates(self, v: Vec2) -> Vec2:
        """Solve ``z1*a1 + z2*a2 = v`` for ``(z1, z2)``."""
        return self._inv.apply(v)

    def point(self, z1, z2) -> Vec2:
        return self.matrix.apply(Vec2(Fraction(z1), Fraction(z2)))

    def contains(self, v: Vec2) -> bool:
        z = self._inv.apply(v)
        return z.x.denominator == 1 and z.y.denominator == 1

    def half_contains(self, v: Vec2) -> bool:
        return self.contains(v * 2)

    def is_sublattice_of(self, other: "Lattice2") -> bool:
        return all(other.contains(b) for b in self.basis)

    def same_lattice(self, other: "Lattice2") -> bool:
        return self.is_sublattice_of(other) and other.is_sublattice_of(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice2) and self.same_lattice(other)

    def __hash__(self) -> int:
        return hash(self.hnf_basis())

    def hnf_basis(self) -> tuple[Vec2, Vec2]:
        """Canonical basis: lower-triangular Hermite form of the basis matrix."""
        return hermite_basis(self.basis)


def lattice_contains(L: Lattice2, v) -> bool:
    return L.contains(as_vec(v))


def hermite_basis(vectors: Sequence[Vec2]) -> tuple[Vec2, Vec2]:
    """Canonical basis of the lattice generated by ``vectors`` (rank 2 required).

    Works on the common-denominator integer matrix with column operations,
    giving basis ``(h11, h21), (0, h22)`` with ``h11, h22 > 0`` and
    ``0 <= h21 < h22``.
    """
    den = 1
    for v in vectors:
        den = math.lcm(den, v.x.denominator, v.y.denominator)
    cols = [[int(v.x * den), int(v.y * den)] for v in vectors]
    cols = [c for c in cols if c != [0, 0]]
    # first row: gcd into a single column
    pivot = None
    rest = []
    for c in cols:
        if pivot is None:
            pivot = c
            continue
        while c[0] != 0:
            k = pivot[0] // c[0]
            pivot = [pivot[0] - k * c[0], pivot[1] - k * c[1]]
            pivot, c = c, pivot
        rest.append(c)
    if pivot is None or pivot[0] == 0:
        raise SingularMatrix("vectors do not span the plane")
    g = 0
    for c in rest:
        g = math.gcd(g, c[1])
    if g == 0:
        raise SingularMatrix("vectors do not span the plane")
    if pivot[0] < 0:
        pivot = [-pivot[0], -pivot[1]]
    h21 = pivot[1] % g
    return (
        Vec2(Fraction(pivot[0], den), Fraction(h21, den)),
        Vec2(Fraction(0), Fraction(g, den)),
    )


def lattice_from_vectors(vectors: Sequence[Vec2]) -> Lattice2:
    return Lattice2(*hermite_basis(vectors))


def half_lattice_points_on_segment(L: Lattice2, a: Vec2, b: Vec2) -> list[Vec2]:
    """Points of ``L/2`` strictly between ``a`` and ``b``, ordered from ``a``."""
    a, b = as_vec(a), as_vec(b)
    sol = _half_lattice_line(L, a, b)
    if sol is None:
        return []
    z0, step, k_lo, k_hi = sol
    # k increases in the direction of b - a, so the list is ordered from a
    return [L.point(z0.x + k * step[0], z0.y + k * step[1]) / 2 for k in range(k_lo, k_hi + 1)]


def has_half_lattice_point(L: Lattice2, a: Vec2, b: Vec2) -> bool:
    """Whether the open segment ``(a, b)`` contains a point of ``L/2``."""
    sol = _half_lattice_line(L, as_vec(a), as_vec(b))
    return sol is not None and sol[3] >= sol[2]


def _half_lattice_line(L: Lattice2, a: Vec2, b: Vec2):
    """Integer points of the open segment in coordinates of the basis of L/2.

    The points are ``z0 + k*step`` for ``k_lo <= k <= k_hi`` where ``step`` is
    the primitive integer direction of the segment; returns ``None`` if the
    supporting line carries no integer point at all.
    """
    if a == b:
        raise ValueError("segment endpoints coincide")
    za = L.coordinates(a) * 2
    zb = L.coordinates(b) * 2
    d = zb - za
    den = math.lcm(d.x.denominator, d.y.denominator)
    p, r = int(d.x * den), int(d.y * den)
    g = math.gcd(p, r)
    p, r = p // g, r // g
    # the supporting line is r*x - p*y = c
    c = r * za.x - p * za.y
    if c.denominator != 1:
        return None
    c = int(c)
    # extended Euclid on (r, -p): gcd is 1 because (p, r) is primitive
    g0, s, t = _ext_gcd(r, -p)
    x0, y0 = s * c * g0, t * c * g0  # g0 is +-1
    # position along the segment: lam(k) = (z0 + k*(p, r) - za) . (p, r) / |(p, r)|^2
    n2 = p * p + r * r
    base = (x0 - za.x) * p + (y0 - za.y) * r
    # the segment spans lam in (0, |d|/|(p,r)|) with |d| / |(p,r)| = d.x/p or d.y/r
    length = d.x / p if p != 0 else d.y / r
    # want 0 < base + k*n2 < length*n2
    k_lo = math.floor(-base / n2) + 1
    k_hi = math.ceil((length * n2 - base) / n2) - 1
    return Vec2(Fraction(x0), Fraction(y0)), (p, r), k_lo, k_hi


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b = g = +-gcd(a, b)``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    return old_r, old_s, old_t


def apply_linear(M: Mat2, obj):
    """Image of a polygon, lattice or vector under ``M``."""
    if M.det == 0:
        raise SingularMatrix("cannot apply a singular matrix")
    if isinstance(obj, ConvexPolygon):
        return ConvexPolygon([M.apply(p) for p in obj.vertices])
    if isinstance(obj, Lattice2):
        return Lattice2(M.apply(obj.basis[0]), M.apply(obj.basis[1]))
    return M.apply(as_vec(obj))
