"""Ground-truth covering multiplicity of ``P + L``.

Everything is done in lattice coordinates, where ``L`` becomes the integer
lattice and the fundamental cell is the unit torus ``[0, 1)^2``. The exact mode
cuts the torus into vertical slabs at every x where the arrangement of
translate edges changes: vertex abscissae and crossings between edges of the
polygon and its integer shifts, all taken mod 1. Inside a slab no two edges
cross, so along the slab's middle line the edges cut the circle ``y mod 1``
into arcs, each arc being one open face (a trapezoid) of the arrangement.
The count is taken exactly at the first arc and updated by +1/-1 at every
lower/upper edge crossed. The face areas are summed as a volume check:
``sum(count * area) == area(P) / det(L)`` and ``sum(area) == 1``.
"""

from __future__ import annotations

import hashlib
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .geometry import ConvexPolygon, Lattice2, Location, Vec2, apply_linear, point_in_polygon

DEFAULT_SEGMENT_CAP = 10 ** 5
SAMPLE_DENOMINATOR = 1_000_003  # prime, so sample points rarely land on edges
MAX_REPORTED_VIOLATIONS = 50


class ArrangementOverflow(RuntimeError):
    pass


class OracleInconsistency(AssertionError):
    """Internal volume accounting failed; indicates a bug, never bad input."""


@dataclass
class MultiplicityReport:
    """Result of an oracle run.

    ``histogram`` maps a count to the area fraction of the cell where it holds
    (exact mode) or to the number of sample points that saw it (sampled mode).
    Sampled reports never claim uniformity; ``no_violation_found`` is the most
    they can say.
    """

    mode: str
    uniform: bool
    fold: Optional[int]
    histogram: dict
    violations: list = field(default_factory=list)
    faces: int = 0
    n: Optional[int] = None
    seed: Optional[int] = None
    skipped: int = 0
    digest: Optional[str] = None

    @property
    def no_violation_found(self) -> bool:
        return len(self.histogram) == 1

    def observed_fold(self) -> Optional[int]:
        return next(iter(self.histogram)) if len(self.histogram) == 1 else None

    def to_dict(self) -> dict:
        from .serialize import encode

        out = {
            "mode": self.mode,
            "uniform": self.uniform,
            "fold": self.fold,
            "histogram": {str(k): encode(v) for k, v in sorted(self.histogram.items())},
            "violations": [{"point": encode(p), "count": c} for p, c in self.violations],
        }
        if self.mode == "exact":
            out["faces"] = self.faces
        else:
            out.update(n=self.n, seed=self.seed, skipped=self.skipped, digest=self.digest)
        return out


class _LatticeFrame:
    """``P`` expressed in coordinates of the lattice basis, scaled to integers."""

    def __init__(self, P: ConvexPolygon, L: Lattice2):
        self.L = L
        self.Pl = apply_linear(L.matrix.inverse(), P)  # lattice coordinates; orientation fixed up
        verts = self.Pl.vertices
        self.Q = math.lcm(*(c.denominator for v in verts for c in v))
        self.X = [int(v.x * self.Q) for v in verts]
        self.Y = [int(v.y * self.Q) for v in verts]
        self.n = len(verts)
        self.xmin, self.ymin, self.xmax, self.ymax = self.Pl.bbox

    def translates_near(self, z: Vec2):
        """Integer t whose translate ``Pl + t`` may contain ``z``."""
        for i in range(math.ceil(z.x - self.xmax), math.floor(z.x - self.xmin) + 1):
            for j in range(math.ceil(z.y - self.ymax), math.floor(z.y - self.ymin) + 1):
                yield i, j

    def count_at(self, z: Vec2) -> tuple[int, int]:
        inside = boundary = 0
        for i, j in self.translates_near(z):
            loc = point_in_polygon(self.Pl, Vec2(z.x - i, z.y - j)).location
            if loc is Location.INTERIOR:
                inside += 1
            elif loc is Location.BOUNDARY:
                boundary += 1
        return inside, boundary


def covering_multiplicity_at(P: ConvexPolygon, L: Lattice2, x: Vec2) -> tuple[int, int]:
    """``(interior_count, boundary_count)`` of translates ``P + l`` at ``x``."""
    frame = _LatticeFrame(P, L)
    return frame.count_at(L.coordinates(Vec2(Fraction(x[0]), Fraction(x[1]))))


def _frac(t: Fraction) -> Fraction:
    return t - math.floor(t)


def _event_abscissae(fr: _LatticeFrame) -> list[Fraction]:
    """Sorted x values in [0, 1) where the torus arrangement can change."""
    Q, X, Y, n = fr.Q, fr.X, fr.Y, fr.n
    xs = {Fraction(0)}
    for x in X:
        xs.add(_frac(Fraction(x, Q)))
    edges = [(X[k - 1], Y[k - 1], X[k], Y[k]) for k in range(n)]
    w = max(X) - min(X)
    h = max(Y) - min(Y)
    di = w // Q + 1
    dj = h // Q + 1
    for si in range(-di, di + 1):
        for sj in range(-dj, dj + 1):
            if si == 0 and sj == 0:
                continue
            ox, oy = si * Q, sj * Q
            for (ax, ay, bx, by) in edges:
                for (cx, cy, ex, ey) in edges:
                    cx2, cy2, ex2, ey2 = cx + ox, cy + oy, ex + ox, ey + oy
                    if max(cx2, ex2) < min(ax, bx) or max(ax, bx) < min(cx2, ex2):
                        continue
                    if max(cy2, ey2) < min(ay, by) or max(ay, by) < min(cy2, ey2):
                        continue
                    rx, ry = bx - ax, by - ay
                    sx, sy = ex2 - cx2, ey2 - cy2
                    den = rx * sy - ry * sx
                    if den == 0:
                        continue  # parallel edges never reorder
                    qpx, qpy = cx2 - ax, cy2 - ay
                    tn = qpx * sy - qpy * sx
                    un = qpx * ry - qpy * rx
                    if den < 0:
                        den, tn, un = -den, -tn, -un
                    if 0 <= tn <= den and 0 <= un <= den:
                        xs.add(_frac(Fraction(ax * den + tn * rx, den * Q)))
    return sorted(xs)


def _column_intervals(fr: _LatticeFrame, x: Fraction):
    """Open y-intervals cut from every column translate by the line at ``x``."""
    Pl = fr.Pl
    verts = Pl.vertices
    out = []
    for i in range(math.ceil(x - fr.xmax), math.floor(x - fr.xmin) + 1):
        u = x - i
        if not (fr.xmin < u < fr.xmax):
            continue
        ys = []
        for k in range(len(verts)):
            a, b = verts[k - 1], verts[k]
            if a.x == b.x:
                continue
            lo, hi = (a, b) if a.x < b.x else (b, a)
            if lo.x <= u <= hi.x:
                ys.append(a.y + (b.y - a.y) * (u - a.x) / (b.x - a.x))
        out.append((min(ys), max(ys)))
    return out


def _count_in_intervals(intervals, y: Fraction) -> int:
    total = 0
    for lo, hi in intervals:
        # integers j with lo < y - j < hi
        jmin = math.floor(y - hi) + 1
        jmax = math.ceil(y - lo) - 1
        if jmax >= jmin:
            total += jmax - jmin + 1
    return total


def exact_uniform_multiplicity(
    P: ConvexPolygon,
    L: Lattice2,
    expected: Optional[int] = None,
    segment_cap: int = DEFAULT_SEGMENT_CAP,
) -> MultiplicityReport:
    """Decide exactly whether ``P + L`` covers the plane uniformly.

    ``expected`` selects which count counts as correct when listing
    violations; by default the count covering the largest area is used.
    """
    fr = _LatticeFrame(P, L)
    cols = fr.xmax - fr.xmin + 1
    rows = fr.ymax - fr.ymin + 1
    segments = math.ceil(cols + 1) * math.ceil(rows + 1) * fr.n
    if segments > segment_cap:
        raise ArrangementOverflow(f"about {segments} edge segments exceed the cap {segment_cap}")
    xs = _event_abscissae(fr) + [Fraction(1)]
    faces = []  # (point in lattice coords, count, area)
    for xa, xb in zip(xs, xs[1:]):
        xm = (xa + xb) / 2
        width = xb - xa
        intervals = _column_intervals(fr, xm)
        marks = []
        for lo, hi in intervals:
            marks.append((_frac(lo), 1))
            marks.append((_frac(hi), -1))
        marks.sort()
        cuts = sorted({m for m, _ in marks})
        if not cuts:
            continue
        # arcs between consecutive distinct cut points, the last one wrapping
        arcs = [(cuts[k], cuts[k + 1]) for k in range(len(cuts) - 1)]
        arcs.append((cuts[-1], cuts[0] + 1))
        delta = Counter()
        for m, s in marks:
            delta[m] += s
        count = _count_in_intervals(intervals, (arcs[0][0] + arcs[0][1]) / 2)
        for k, (ya, yb) in enumerate(arcs):
            if k:
                count += delta[ya]
            faces.append((Vec2(xm, _frac((ya + yb) / 2)), count, width * (yb - ya)))
    hist: dict[int, Fraction] = {}
    for _, c, a in faces:
        hist[c] = hist.get(c, Fraction(0)) + a
    if sum(hist.values()) != 1 or sum(c * a for c, a in hist.items()) != fr.Pl.area:
        raise OracleInconsistency("face areas do not account for the cell and the polygon")
    reference = expected if expected is not None else max(hist, key=lambda c: (hist[c], -c))
    uniform = len(hist) == 1
    violations = []
    for z, c, _ in faces:
        if c != reference and len(violations) < MAX_REPORTED_VIOLATIONS:
            violations.append((L.point(z.x, z.y), c))
    return MultiplicityReport(
        mode="exact",
        uniform=uniform,
        fold=next(iter(hist)) if uniform else None,
        histogram=hist,
        violations=violations,
        faces=len(faces),
    )


def sampled_multiplicity(P: ConvexPolygon, L: Lattice2, n: int, seed: int) -> MultiplicityReport:
    """Interior counts at ``n`` seeded random points of the fundamental cell.

    Points landing on a translate boundary are redrawn and counted in
    ``skipped``. The histogram maps count to number of points.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    fr = _LatticeFrame(P, L)
    rng = random.Random(seed)
    D = SAMPLE_DENOMINATOR
    Q, X, Y, m = fr.Q, fr.X, fr.Y, fr.n
    # integer half-planes: interior iff dx*(Q*py - Y0) - dy*(Q*px - X0) > 0
    planes = [(X[k] - X[k - 1], Y[k] - Y[k - 1], X[k - 1], Y[k - 1]) for k in range(m)]
    xmin, xmax, ymin, ymax = fr.xmin, fr.xmax, fr.ymin, fr.ymax
    hist: Counter = Counter()
    points = []
    skipped = 0
    h = hashlib.sha256()
    while len(points) < n:
        u, v = rng.randrange(D), rng.randrange(D)
        zx, zy = Fraction(u, D), Fraction(v, D)
        inside = 0
        on_edge = False
        for i in range(math.ceil(zx - xmax), math.floor(zx - xmin) + 1):
            for j in range(math.ceil(zy - ymax), math.floor(zy - ymin) + 1):
                # point relative to the translate, scaled by D: (u - i*D, v - j*D)
                pu, pv = u - i * D, v - j * D
                status = 1
                for dx, dy, x0, y0 in planes:
                    s = dx * (Q * pv - D * y0) - dy * (Q * pu - D * x0)
                    if s < 0:
                        status = -1
                        break
                    if s == 0:
                        status = 0
                if status == 1:
                    inside += 1
                elif status == 0:
                    on_edge = True
        if on_edge:
            skipped += 1
            continue
        hist[inside] += 1
        h.update(f"{u},{v};".encode())
        points.append((zx, zy, inside))
    reference = max(hist, key=lambda c: (hist[c], -c))
    violations = [
        (L.point(zx, zy), c) for zx, zy, c in points if c != reference
    ][:MAX_REPORTED_VIOLATIONS]
    return MultiplicityReport(
        mode="sampled",
        uniform=False,
        fold=reference if len(hist) == 1 else None,
        histogram=dict(hist),
        violations=violations,
        n=n,
        seed=seed,
        skipped=skipped,
        digest=h.hexdigest(),
    )


def verify_kfold(instance, mode: str = "exact", n: int = 10_000, seed: int = 0) -> bool:
    """True iff the oracle sees multiplicity ``instance.fold`` everywhere."""
    if mode == "exact":
        rep = exact_uniform_multiplicity(instance.polygon, instance.lattice, expected=instance.fold)
        return rep.uniform and rep.fold == instance.fold
    if mode in ("sample", "sampled"):
        rep = sampled_multiplicity(instance.polygon, instance.lattice, n, seed)
        return rep.histogram == {instance.fold: n}
    raise ValueError(f"unknown oracle mode {mode!r}")
