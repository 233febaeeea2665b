"""Edge/angle metrics of convex polygons and membership in the known tile types.

Angles are transcendental in the coordinates, so angle conditions are checked
with high-precision arithmetic (mpmath, 128-bit mantissa) against
``EPS_ANGLE``. Length relations of the form ``a*l_i = b*l_j`` are first
compared exactly on squared lengths; relations involving sums of lengths
fall back to high precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .geometry import ConvexPolygon, Vec2, is_centrally_symmetric

WORKING_PREC = 128
EPS_ANGLE = 2.0 ** -40
EPS_LEN = 2.0 ** -40
# a condition group this close but not within tolerance makes the verdict Unknown
NEAR_MISS = 1e-6


class WrongArity(ValueError):
    pass


class DegenerateAngle(ValueError):
    pass


def _mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class PolygonMetrics:
    """Angles and squared edge lengths under one vertex labeling.

    Index ``k`` (0-based) holds the conventional quantity with subscript
    ``k + 1``: ``angles[k]`` is the inner angle at ``w_{k+1}`` and
    ``sq_edge_lengths[k]`` the squared length of the edge joining
    ``w_k`` and ``w_{k+1}`` (``w_0 = w_n``).
    """

    n: int
    angles: tuple
    sq_edge_lengths: tuple[Fraction, ...]
    offset: int = 0
    reflected: bool = False
    lengths: tuple = ()

    def angles_deg(self) -> list[float]:
        return [float(a * 180 / mpmath.pi) for a in self.angles]


def relabel(P: ConvexPolygon, offset: int = 0, reflected: bool = False) -> list[Vec2]:
    """Vertex sequence ``w_1..w_n`` for a labeling (cyclic offset, optional mirror)."""
    v = P.vertices
    n = len(v)
    if reflected:
        return [v[(offset - j) % n] for j in range(n)]
    return [v[(offset + j) % n] for j in range(n)]


def compute_metrics(P: ConvexPolygon, offset: int = 0, reflected: bool = False) -> PolygonMetrics:
    w = relabel(P, offset, reflected)
    n = len(w)
    sq = tuple((w[k] - w[k - 1]).norm2() for k in range(n))
    with mpmath.workprec(WORKING_PREC):
        angles = []
        for k in range(n):
            a = w[k - 1] - w[k]
            b = w[(k + 1) % n] - w[k]
            ang = mpmath.atan2(_mpf(abs(a.cross(b))), _mpf(a.dot(b)))
            if ang < EPS_ANGLE or mpmath.pi - ang < EPS_ANGLE:
                raise DegenerateAngle(f"angle at vertex {k + 1} is degenerate")
            angles.append(ang)
        total = mpmath.fsum(angles)
        if abs(total - (n - 2) * mpmath.pi) > EPS_ANGLE:
            raise DegenerateAngle("inner angles do not sum to (n-2)*pi")
        lengths = tuple(mpmath.sqrt(_mpf(s)) for s in sq)
    return PolygonMetrics(n, tuple(angles), sq, offset % n, reflected, lengths)


def edge_count_gate(P: ConvexPolygon) -> bool:
    """Necessary condition for a convex polygon to tile: at most six edges."""
    return P.n <= 6


def fedorov_check(P: ConvexPolygon) -> bool:
    """Lattice (equivalently translative) one-fold tile: parallelogram or cs hexagon."""
    return P.n in (4, 6) and is_centrally_symmetric(P)


# --- tile type condition tables -------------------------------------------
#
# Angle conditions: (coefficients over 1-based angle indices, rhs as a multiple
# of pi). Length conditions: coefficients over 1-based edge indices of a
# relation sum(c_i * l_i) = 0.

@dataclass(frozen=True)
class TypeConditions:
    tag: str
    n: int
    angles: tuple = ()
    lengths: tuple = ()


def _A(coeffs: dict, rhs) -> tuple:
    return (tuple(sorted(coeffs.items())), Fraction(rhs))


def _L(coeffs: dict) -> tuple:
    return tuple(sorted(coeffs.items()))


F = Fraction
TILE_TYPES: dict[str, TypeConditions] = {
    t.tag: t
    for t in [
        TypeConditions("Hex1", 6, (_A({1: 1, 2: 1, 3: 1}, 2),), (_L({1: 1, 4: -1}),)),
        TypeConditions("Hex2", 6, (_A({1: 1, 2: 1, 4: 1}, 2),),
                       (_L({1: 1, 4: -1}), _L({3: 1, 5: -1}))),
        TypeConditions("Hex3", 6,
                       (_A({1: 1}, F(2, 3)), _A({3: 1}, F(2, 3)), _A({5: 1}, F(2, 3))),
                       (_L({1: 1, 2: -1}), _L({3: 1, 4: -1}), _L({5: 1, 6: -1}))),
        TypeConditions("Pent1", 5, (_A({1: 1, 2: 1, 3: 1}, 2),)),
        TypeConditions("Pent2", 5, (_A({1: 1, 2: 1, 4: 1}, 2),), (_L({1: 1, 4: -1}),)),
        TypeConditions("Pent3", 5,
                       (_A({1: 1}, F(2, 3)), _A({3: 1}, F(2, 3)), _A({4: 1}, F(2, 3))),
                       (_L({1: 1, 2: -1}), _L({4: 1, 3: -1, 5: -1}))),
        TypeConditions("Pent4", 5, (_A({1: 1}, F(1, 2)), _A({3: 1}, F(1, 2))),
                       (_L({1: 1, 2: -1}), _L({3: 1, 4: -1}))),
        TypeConditions("Pent5", 5, (_A({1: 1}, F(1, 3)), _A({3: 1}, F(2, 3))),
                       (_L({1: 1, 2: -1}), _L({3: 1, 4: -1}))),
        TypeConditions("Pent6", 5, (_A({1: 1, 2: 1, 4: 1}, 2), _A({1: 1, 3: -2}, 0)),
                       (_L({1: 1, 2: -1}), _L({2: 1, 5: -1}), _L({3: 1, 4: -1}))),
        TypeConditions("Pent7", 5, (_A({2: 2, 3: 1}, 2), _A({4: 2, 1: 1}, 2)),
                       (_L({1: 1, 2: -1}), _L({2: 1, 3: -1}), _L({3: 1, 4: -1}))),
        TypeConditions("Pent8", 5, (_A({1: 2, 2: 1}, 2), _A({4: 2, 3: 1}, 2)),
                       (_L({1: 1, 2: -1}), _L({2: 1, 3: -1}), _L({3: 1, 4: -1}))),
        # the angle sum 3*pi together with the other conditions forces 2*a3 + a4 = 2*pi
        TypeConditions("Pent9", 5,
                       (_A({5: 1}, F(1, 2)), _A({1: 1, 4: 1}, 1),
                        _A({2: 2, 4: -1}, 1), _A({3: 2, 4: 1}, 2)),
                       (_L({1: 1, 2: -1, 4: -1}), _L({1: 1, 5: -1}))),
        TypeConditions("Pent10", 5, (_A({2: 1, 5: 2}, 2), _A({3: 1, 4: 2}, 2)),
                       (_L({1: 1, 2: -1}), _L({2: 1, 3: -1}), _L({3: 1, 4: -1}))),
        TypeConditions("Pent11", 5,
                       (_A({1: 1}, F(1, 2)), _A({3: 1, 5: 1}, 1), _A({2: 2, 3: 1}, 2)),
                       (_L({1: 2, 3: 1, 4: -1}), _L({4: 1, 5: -1}))),
        TypeConditions("Pent12", 5,
                       (_A({1: 1}, F(1, 2)), _A({3: 1, 5: 1}, 1), _A({2: 2, 3: 1}, 2)),
                       (_L({1: 2, 3: -1, 5: -1}), _L({1: 2, 4: -1}))),
        TypeConditions("Pent13", 5,
                       (_A({1: 1}, F(1, 2)), _A({3: 1}, F(1, 2)),
                        _A({2: 2, 4: 1}, 2), _A({5: 2, 4: 1}, 2)),
                       (_L({3: 1, 4: -1}), _L({3: 2, 5: -1}))),
        TypeConditions("Pent14", 5,
                       (_A({1: 1}, F(1, 2)), _A({2: 2, 3: 1}, 2), _A({3: 1, 5: 1}, 1)),
                       (_L({1: 1, 3: -1}), _L({3: 2, 4: -1}), _L({4: 1, 5: -1}))),
        # the other four angles and the sum 3*pi force a2 = 3*pi/4
        TypeConditions("Pent15", 5,
                       (_A({1: 1}, F(1, 3)), _A({2: 1}, F(3, 4)), _A({3: 1}, F(7, 12)),
                        _A({4: 1}, F(1, 2)), _A({5: 1}, F(5, 6))),
                       (_L({1: 1, 2: -2}), _L({2: 1, 4: -1}), _L({4: 1, 5: -1}))),
    ]
}

HEXAGON_TYPES = [t for t in TILE_TYPES if t.startswith("Hex")]
PENTAGON_TYPES = [t for t in TILE_TYPES if t.startswith("Pent")]


def _angle_residual(m: PolygonMetrics, cond) -> float:
    coeffs, rhs = cond
    with mpmath.workprec(WORKING_PREC):
        lhs = mpmath.fsum(c * m.angles[i - 1] for i, c in coeffs)
        return float(abs(lhs - rhs * mpmath.pi))


def _length_residual(m: PolygonMetrics, coeffs) -> float:
    pos = [(i, c) for i, c in coeffs if c > 0]
    neg = [(i, -c) for i, c in coeffs if c < 0]
    if len(pos) == 1 and len(neg) == 1:
        (i, a), (j, b) = pos[0], neg[0]
        if a * a * m.sq_edge_lengths[i - 1] == b * b * m.sq_edge_lengths[j - 1]:
            return 0.0
    lengths = m.lengths
    with mpmath.workprec(WORKING_PREC):
        lhs = mpmath.fsum(c * lengths[i - 1] for i, c in coeffs)
        scale = max(lengths)
        return float(abs(lhs) / scale)


def type_residual(m: PolygonMetrics, conds: TypeConditions) -> tuple[float, float]:
    """Worst angle residual (radians) and worst relative length residual."""
    ra = max((_angle_residual(m, c) for c in conds.angles), default=0.0)
    rl = max((_length_residual(m, c) for c in conds.lengths), default=0.0)
    return ra, rl


@dataclass(frozen=True)
class Match:
    tag: str
    offset: int
    reflected: bool


@dataclass
class MatchReport:
    n: int
    verdict: str  # "Tile" | "NotTile" | "Unknown"
    matches: list[Match] = field(default_factory=list)
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def types(self) -> set[str]:
        return {m.tag for m in self.matches}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "verdict": self.verdict,
            "matches": [
                {"type": m.tag, "offset": m.offset, "reflected": m.reflected}
                for m in self.matches
            ],
            "residuals": dict(self.residuals),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatchReport":
        return cls(
            n=data["n"],
            verdict=data["verdict"],
            matches=[Match(m["type"], m["offset"], m["reflected"]) for m in data["matches"]],
            residuals=dict(data["residuals"]),
        )


def labelings(n: int):
    return itertools.product((False, True), range(n))


def _classify(P: ConvexPolygon, tags, eps_angle: float, eps_len: float) -> MatchReport:
    matches: list[Match] = []
    best: dict[str, float] = {}
    for reflected, offset in labelings(P.n):
        m = compute_metrics(P, offset, reflected)
        for tag in tags:
            ra, rl = type_residual(m, TILE_TYPES[tag])
            worst = max(ra / eps_angle, rl / eps_len)
            score = max(ra, rl)
            if tag not in best or score < best[tag]:
                best[tag] = score
            if worst <= 1.0:
                matches.append(Match(tag, offset, reflected))
    if matches:
        verdict = "Tile"
    elif min(best.values()) < NEAR_MISS:
        verdict = "Unknown"
    else:
        # the hexagon and pentagon lists are both complete
        verdict = "NotTile"
    return MatchReport(P.n, verdict, matches, best)


def classify_hexagon(P: ConvexPolygon, eps_angle: float = EPS_ANGLE,
                     eps_len: float = EPS_LEN) -> MatchReport:
    if P.n != 6:
        raise WrongArity(f"expected a hexagon, got {P.n} vertices")
    return _classify(P, HEXAGON_TYPES, eps_angle, eps_len)


def classify_pentagon(P: ConvexPolygon, eps_angle: float = EPS_ANGLE,
                      eps_len: float = EPS_LEN) -> MatchReport:
    if P.n != 5:
        raise WrongArity(f"expected a pentagon, got {P.n} vertices")
    return _classify(P, PENTAGON_TYPES, eps_angle, eps_len)


def classify(P: ConvexPolygon, eps_angle: float = EPS_ANGLE,
             eps_len: float = EPS_LEN) -> MatchReport:
    """Classify any convex polygon as a (one-fold, congruent) plane tile."""
    if P.n == 3:
        return MatchReport(3, "Tile", [Match("Triangle", 0, False)])
    if P.n == 4:
        return MatchReport(4, "Tile", [Match("Quadrilateral", 0, False)])
    if P.n == 5:
        return classify_pentagon(P, eps_angle, eps_len)
    if P.n == 6:
        return classify_hexagon(P, eps_angle, eps_len)
    return MatchReport(P.n, "NotTile")


# Kepler's eleven Archimedean vertex types
KEPLER_TYPES = [
    (3, 3, 3, 3, 3, 3), (3, 3, 3, 3, 6), (3, 3, 3, 4, 4), (3, 3, 4, 3, 4),
    (3, 4, 6, 4), (3, 6, 3, 6), (3, 12, 12), (4, 4, 4, 4), (4, 6, 12),
    (4, 8, 8), (6, 6, 6),
]


def canonical_cycle(seq) -> tuple[int, ...]:
    """Lexicographically smallest rotation of the sequence or its reverse."""
    seq = tuple(seq)
    forms = []
    for s in (seq, tuple(reversed(seq))):
        forms.extend(s[i:] + s[:i] for i in range(len(s)))
    return min(forms)


_KEPLER_CANON = {canonical_cycle(t) for t in KEPLER_TYPES}


def archimedean_vertex_check(seq) -> str:
    """'Listed', 'AngleValidOnly' or 'Invalid' for a cyclic vertex type."""
    seq = tuple(int(s) for s in seq)
    if not seq or any(s < 3 for s in seq):
        return "Invalid"
    if sum(1 - Fraction(2, s) for s in seq) != 2:
        return "Invalid"
    return "Listed" if canonical_cycle(seq) in _KEPLER_CANON else "AngleValidOnly"
