"""Local structure of a translative multiple tiling around its vertices.

At a point ``v`` of ``V + X`` every translate ``P + x`` with ``v`` on its
boundary contributes an inner angle: the clockwise sweep from the half-line
``L1`` (towards the previous vertex of ``P``) to ``L2`` (towards the next
one); a point in the relative interior of an edge gives a straight angle.
Chaining members whose ``L2`` equals the next member's ``L1`` splits them into
closed wheels, and a wheel's winding number is the number of times its
sweeps pass the reference ray ``(1, 0)``. The sum of the windings plus the
number of translates containing ``v`` in their interior must equal the fold.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .geometry import (
    ConvexPolygon,
    Lattice2,
    Location,
    PointLocation,
    Vec2,
    ccw_before,
    point_in_polygon,
    q,
)
from .multitiling import bolle_check


class WindowTooSmall(ValueError):
    pass


class MarginViolation(ValueError):
    pass


class ChainingFailure(RuntimeError):
    pass


def reduced_basis(L: Lattice2) -> tuple[Vec2, Vec2]:
    """Lagrange-Gauss reduced basis (shortest vector first)."""
    a, b = L.basis
    if a.norm2() > b.norm2():
        a, b = b, a
    while True:
        k = round(a.dot(b) / a.norm2())
        b = b - a * k
        if b.norm2() >= a.norm2():
            return a, b
        a, b = b, a


@dataclass(frozen=True)
class Window:
    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    @classmethod
    def square(cls, r) -> "Window":
        r = q(r)
        return cls(-r, -r, r, r)

    def contains(self, p: Vec2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax


def _meets_window(P: ConvexPolygon, t: Vec2, w: Window) -> bool:
    """Exact separating-axis test between ``P + t`` and the closed window."""
    xmin, ymin, xmax, ymax = P.bbox
    if xmax + t.x < w.xmin or xmin + t.x > w.xmax or ymax + t.y < w.ymin or ymin + t.y > w.ymax:
        return False
    corners = [Vec2(w.xmin, w.ymin), Vec2(w.xmax, w.ymin), Vec2(w.xmax, w.ymax), Vec2(w.xmin, w.ymax)]
    for a, b in (P.edge(i) for i in range(P.n)):
        a, e = a + t, b - a
        # every corner strictly right of a ccw edge: the edge line separates
        if all(e.cross(c - a) < 0 for c in corners):
            return False
    return True


@dataclass(frozen=True)
class Patch:
    polygon: ConvexPolygon
    lattice: Lattice2
    translations: tuple[Vec2, ...]
    window: Window
    claimed_fold: int
    member_counts: Counter = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "member_counts", Counter(self.translations))

    def without(self, x: Vec2) -> "Patch":
        """Copy with one translate removed (fault injection)."""
        rest = list(self.translations)
        rest.remove(x)
        return Patch(self.polygon, self.lattice, tuple(rest), self.window, self.claimed_fold)

    @property
    def vertices(self) -> list[Vec2]:
        """Distinct points of ``V + X``, sorted."""
        return sorted({v + x for x in self.translations for v in self.polygon.vertices})


def build_patch(P: ConvexPolygon, L: Lattice2, window, claimed_fold: Optional[int] = None) -> Patch:
    """All translates ``P + l`` (``l`` in ``L``) meeting the closed window."""
    if not isinstance(window, Window):
        window = Window(*(q(c) for c in window))
    for v in reduced_basis(L):
        span = max(abs(v.x), abs(v.y))
        if window.xmax - window.xmin < 3 * span or window.ymax - window.ymin < 3 * span:
            raise WindowTooSmall("the window must span at least three lattice periods per axis")
    if claimed_fold is None:
        res = bolle_check(P, L)
        if res.passed:
            claimed_fold = res.fold
        else:
            k = P.area / L.det
            if k.denominator != 1:
                raise ValueError("no fold given and area/det is not an integer")
            claimed_fold = int(k)
    pxmin, pymin, pxmax, pymax = P.bbox
    # lattice points of the rectangle window - P, found through lattice coordinates
    rect = [Vec2(window.xmin - pxmax, window.ymin - pymax), Vec2(window.xmax - pxmin, window.ymin - pymax),
            Vec2(window.xmax - pxmin, window.ymax - pymin), Vec2(window.xmin - pxmax, window.ymax - pymin)]
    zs = [L.coordinates(c) for c in rect]
    found = []
    for i in range(math.floor(min(z.x for z in zs)), math.ceil(max(z.x for z in zs)) + 1):
        for j in range(math.floor(min(z.y for z in zs)), math.ceil(max(z.y for z in zs)) + 1):
            t = L.point(i, j)
            if _meets_window(P, t, window):
                found.append(t)
    return Patch(P, L, tuple(sorted(found)), window, claimed_fold)


@dataclass(frozen=True)
class VertexStar:
    vertex: Vec2
    boundary_members: tuple[tuple[Vec2, PointLocation], ...]
    interior_count: int


def _candidates(patch: Patch, v: Vec2):
    members = patch.member_counts
    xmin, ymin, xmax, ymax = patch.polygon.bbox
    L = patch.lattice
    rect = [Vec2(v.x - xmax, v.y - ymax), Vec2(v.x - xmin, v.y - ymax),
            Vec2(v.x - xmin, v.y - ymin), Vec2(v.x - xmax, v.y - ymin)]
    zs = [L.coordinates(c) for c in rect]
    for i in range(math.floor(min(z.x for z in zs)), math.ceil(max(z.x for z in zs)) + 1):
        for j in range(math.floor(min(z.y for z in zs)), math.ceil(max(z.y for z in zs)) + 1):
            t = L.point(i, j)
            if t in members:
                for _ in range(members[t]):
                    yield t


def vertex_star(patch: Patch, v) -> VertexStar:
    """Classify ``v`` against every translate of the patch.

    Any translate containing a point of the closed window meets the window and
    is therefore in the patch, so stars of points inside the window are
    complete; points outside raise :class:`MarginViolation`.
    """
    v = Vec2(q(v[0]), q(v[1]))
    if not patch.window.contains(v):
        raise MarginViolation(f"({v.x}, {v.y}) lies outside the patch window")
    boundary = []
    interior = 0
    for x in _candidates(patch, v):
        loc = point_in_polygon(patch.polygon, v - x)
        if loc.location is Location.INTERIOR:
            interior += 1
        elif loc.location is Location.BOUNDARY:
            boundary.append((x, loc))
    boundary.sort(key=lambda m: m[0])
    return VertexStar(v, tuple(boundary), interior)


@dataclass(frozen=True)
class Wheel:
    members: tuple[Vec2, ...]
    winding: int


def _primitive(d: Vec2) -> tuple[int, int]:
    den = math.lcm(d.x.denominator, d.y.denominator)
    a, b = int(d.x * den), int(d.y * den)
    g = math.gcd(a, b)
    return a // g, b // g


def _half_lines(P: ConvexPolygon, loc: PointLocation) -> tuple[Vec2, Vec2]:
    w = P.vertices
    n = len(w)
    if loc.vertex is not None:
        k = loc.vertex
        return w[k - 1] - w[k], w[(k + 1) % n] - w[k]
    a, b = P.edge(loc.edge)
    return a - b, b - a


def _cw_before(a: Vec2, b: Vec2) -> bool:
    """Clockwise angle from (1, 0): is ``a`` strictly earlier than ``b``?"""
    return ccw_before(Vec2(a.x, -a.y), Vec2(b.x, -b.y))


def partition_wheels(star: VertexStar, P: ConvexPolygon) -> list[Wheel]:
    """Split the boundary members of a star into adjacent wheels."""
    arcs = []
    for x, loc in star.boundary_members:
        l1, l2 = _half_lines(P, loc)
        arcs.append((x, l1, l2))
    arcs.sort(key=lambda a: a[0])
    by_start: dict[tuple[int, int], list[int]] = defaultdict(list)
    for idx, (_, l1, _) in enumerate(arcs):
        by_start[_primitive(l1)].append(idx)
    used = [False] * len(arcs)
    wheels = []
    for start in range(len(arcs)):
        if used[start]:
            continue
        home = _primitive(arcs[start][1])
        chain = [start]
        used[start] = True
        while _primitive(arcs[chain[-1]][2]) != home:
            nxt = next((i for i in by_start[_primitive(arcs[chain[-1]][2])] if not used[i]), None)
            if nxt is None:
                raise ChainingFailure(
                    f"no member continues the half-line {_primitive(arcs[chain[-1]][2])} "
                    f"at ({star.vertex.x}, {star.vertex.y})"
                )
            used[nxt] = True
            chain.append(nxt)
        winding = sum(1 for i in chain if _cw_before(arcs[i][2], arcs[i][1]))
        wheels.append(Wheel(tuple(arcs[i][0] for i in chain), winding))
    return wheels


@dataclass(frozen=True)
class WheelReport:
    vertex: Vec2
    phi: int
    varphi: int
    wheels: tuple[Wheel, ...]
    eq2_holds: bool


def wheel_report(patch: Patch, v) -> WheelReport:
    star = vertex_star(patch, v)
    wheels = partition_wheels(star, patch.polygon)
    phi = sum(w.winding for w in wheels)
    return WheelReport(star.vertex, phi, star.interior_count, tuple(wheels),
                       phi + star.interior_count == patch.claimed_fold)


@dataclass
class Eq2Report:
    """``(varphi, phi)`` histogram over all checked vertices; ``phi`` is ``None``
    where the members could not be chained into wheels."""

    fold: int
    histogram: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    checked: int = 0
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations and self.checked > 0

    def to_dict(self) -> dict:
        from .serialize import encode

        return {
            "passed": self.passed,
            "fold": self.fold,
            "checked": self.checked,
            "skipped": self.skipped,
            "histogram": [
                {"varphi": a, "phi": b, "count": c}
                for (a, b), c in sorted(self.histogram.items(), key=lambda kv: (kv[0][0], -1 if kv[0][1] is None else kv[0][1]))
            ],
            "violations": [{"vertex": encode(v), "varphi": a, "phi": b} for v, a, b in self.violations],
        }


def check_equation2(patch: Patch) -> Eq2Report:
    """Evaluate ``varphi(v) + phi(v)`` at every vertex of ``V + X``.

    Vertices outside the window are skipped and counted.
    """
    rep = Eq2Report(patch.claimed_fold)
    for v in patch.vertices:
        try:
            star = vertex_star(patch, v)
        except MarginViolation:
            rep.skipped += 1
            continue
        rep.checked += 1
        try:
            phi = sum(w.winding for w in partition_wheels(star, patch.polygon))
        except ChainingFailure:
            phi = None
        rep.histogram[(star.interior_count, phi)] += 1
        if phi is None or phi + star.interior_count != patch.claimed_fold:
            rep.violations.append((v, star.interior_count, phi))
    return rep
