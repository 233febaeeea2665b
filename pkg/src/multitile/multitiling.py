"""Multiple lattice tilings: Bolle's criterion, explicit families, equivalence.

All checks are exact. A polygon is recentred on its symmetry centre before the
edge conditions are tested, and "edge G is a lattice vector" is read as the
difference vector ``v_i - v_{i-1}`` lying in the lattice.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .geometry import (
    ORIGIN,
    ConvexPolygon,
    InvalidPolygon,
    Lattice2,
    Location,
    Mat2,
    Vec2,
    apply_linear,
    centrally_symmetric_center,
    has_half_lattice_point,
    hermite_basis,
    point_in_polygon,
    q,
    vec,
)

F = Fraction


class ParamOutOfRange(ValueError):
    pass


class VertexOutsideW(ValueError):
    pass


class NotConvex(ValueError):
    pass


class InvalidInstance(ValueError):
    pass


# --------------------------------------------------------------------------
# Bolle's criterion


class BolleFailure(enum.Enum):
    NOT_CENTRALLY_SYMMETRIC = "NotCentrallySymmetric"
    EDGE_MISSES_HALF_LATTICE = "EdgeMissesHalfLattice"
    EDGE_VECTOR_NOT_IN_LATTICE = "EdgeVectorNotInLattice"
    NON_INTEGRAL_FOLD = "NonIntegralFold"


@dataclass(frozen=True)
class BolleResult:
    passed: bool
    fold: Optional[int] = None
    failure: Optional[BolleFailure] = None
    edge: Optional[int] = None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        if self.passed:
            return {"passed": True, "fold": self.fold}
        out = {"passed": False, "failure": self.failure.value}
        if self.edge is not None:
            out["edge"] = self.edge
        return out


def recentre(P: ConvexPolygon) -> ConvexPolygon:
    """Translate a centrally symmetric polygon so its centre is the origin."""
    c = centrally_symmetric_center(P)
    if c is None:
        raise InvalidInstance("polygon is not centrally symmetric")
    return P if c == ORIGIN else P.translate(-c)


def bolle_check(P: ConvexPolygon, L: Lattice2) -> BolleResult:
    """Decide whether ``P + L`` is a multiple tiling; edges are 0-based."""
    c = centrally_symmetric_center(P)
    if c is None:
        return BolleResult(False, failure=BolleFailure.NOT_CENTRALLY_SYMMETRIC)
    if c != ORIGIN:
        P = P.translate(-c)
    for i, (a, b) in enumerate(P.edge(i) for i in range(P.n)):
        if L.half_contains((a + b) / 2):
            continue
        if not has_half_lattice_point(L, a, b):
            return BolleResult(False, failure=BolleFailure.EDGE_MISSES_HALF_LATTICE, edge=i)
        if not L.contains(b - a):
            return BolleResult(False, failure=BolleFailure.EDGE_VECTOR_NOT_IN_LATTICE, edge=i)
    k = P.area / L.det
    if k.denominator != 1:
        return BolleResult(False, failure=BolleFailure.NON_INTEGRAL_FOLD)
    return BolleResult(True, fold=int(k))


# --------------------------------------------------------------------------
# Instances and the explicit families


@dataclass(frozen=True)
class MultiTilingInstance:
    """A polygon centred at the origin, a lattice, and a claimed fold.

    The claimed fold is not forced to equal ``area / det``; verifiers compare
    against it, so a wrong claim is representable and gets rejected there.
    """

    polygon: ConvexPolygon
    lattice: Lattice2
    fold: int
    family: Optional[str] = None
    param: object = None

    def __post_init__(self):
        if centrally_symmetric_center(self.polygon) != ORIGIN:
            raise InvalidInstance("polygon must be centrally symmetric about the origin")
        if not isinstance(self.fold, int) or self.fold < 1:
            raise InvalidInstance("fold must be a positive integer")

    @property
    def area_ratio(self) -> Fraction:
        return self.polygon.area / self.lattice.det


def _symmetric(half: Sequence) -> ConvexPolygon:
    pts = [vec(*p) for p in half]
    return ConvexPolygon(pts + [-p for p in pts])


def _instance(P: ConvexPolygon, L: Lattice2, family: str, param) -> MultiTilingInstance:
    k = P.area / L.det
    assert k.denominator == 1, "family constructor produced a non-integral fold"
    return MultiTilingInstance(P, L, int(k), family, param)


def example1_octagon() -> MultiTilingInstance:
    """The seven-fold octagon over the integer lattice."""
    P = _symmetric([(F(1, 2), F(-3, 2)), (F(3, 2), F(-1, 2)), (F(3, 2), F(1, 2)), (F(1, 2), F(3, 2))])
    return _instance(P, Lattice2.integer(), "example1", None)


def _check_range(name, value, lo, hi, hi_closed=False):
    ok = lo < value and (value <= hi if hi_closed else value < hi)
    if not ok:
        bracket = "]" if hi_closed else ")"
        raise ParamOutOfRange(f"{name}={value} outside ({lo}, {hi}{bracket}")


def octagon_alpha(a) -> MultiTilingInstance:
    a = q(a)
    _check_range("alpha", a, 0, F(1, 4))
    P = _symmetric([(-a, F(-3, 2)), (1 - a, F(-3, 2)), (1 + a, F(-1, 2)), (1 - a, F(1, 2))])
    return _instance(P, Lattice2.integer(), "octA", a)


def octagon_beta(b) -> MultiTilingInstance:
    b = q(b)
    _check_range("beta", b, F(1, 4), F(1, 3))
    P = _symmetric([(b, -2), (1 + b, -2), (1 - b, 0), (b, 1)])
    return _instance(P, Lattice2.integer(), "octB", b)


def lattice_alpha_prime(a) -> Lattice2:
    return Lattice2(vec(2, 0), vec(1 + q(a) / 2, 1))


def lattice_beta_prime(b) -> Lattice2:
    return Lattice2(vec(2, 0), vec(1 + q(b) / 2, 2))


def octagon_alpha_prime(a) -> MultiTilingInstance:
    a = q(a)
    _check_range("alpha", a, 0, F(2, 3))
    P = _symmetric([
        (F(3, 2) - 5 * a / 4, -2), (F(-1, 2) - 5 * a / 4, -2),
        (a / 4 - F(3, 2), 0), (a / 4 - F(3, 2), 1),
    ])
    return _instance(P, lattice_alpha_prime(a), "octAp", a)


def octagon_beta_prime(b) -> MultiTilingInstance:
    b = q(b)
    _check_range("beta", b, 0, 1, hi_closed=True)
    P = _symmetric([(2 - b, -3), (-b, -3), (-2, -1), (-2, 1)])
    return _instance(P, lattice_beta_prime(b), "octBp", b)


# the W region and the fixed edge midpoints of the decagon family
W_REGION = ConvexPolygon([(F(-1, 2), 1), (F(-1, 2), F(3, 4)), (F(-2, 3), F(2, 3)), (F(-3, 4), F(3, 4))])
_U_HALF = [vec(0, 1), vec(1, 1), vec(F(3, 2), F(1, 2)), vec(F(3, 2), 0), vec(1, F(-1, 2))]
DECAGON_MIDPOINTS: tuple[Vec2, ...] = tuple(_U_HALF + [-u for u in _U_HALF])


def decagon_from_vertex(v1) -> ConvexPolygon:
    """Decagon with the fixed edge midpoints and ``v1`` as a vertex."""
    v1 = vec(*v1) if not isinstance(v1, Vec2) else v1
    if point_in_polygon(W_REGION, v1).location is not Location.INTERIOR:
        raise VertexOutsideW(f"v1=({v1.x}, {v1.y}) is not an interior point of W")
    pts = [v1]
    for u in DECAGON_MIDPOINTS[:-1]:
        pts.append(u * 2 - pts[-1])
    # the midpoints are symmetric, so the chain closes on its own
    assert DECAGON_MIDPOINTS[-1] * 2 - pts[-1] == v1
    try:
        return ConvexPolygon(pts)
    except InvalidPolygon as exc:
        raise NotConvex(str(exc)) from exc


def decagon_instance(v1) -> MultiTilingInstance:
    v1 = vec(*v1) if not isinstance(v1, Vec2) else v1
    return _instance(decagon_from_vertex(v1), Lattice2.integer(), "decagon", v1)


FAMILY_CONSTRUCTORS: dict[str, Callable] = {
    "octA": octagon_alpha,
    "octB": octagon_beta,
    "octAp": octagon_alpha_prime,
    "octBp": octagon_beta_prime,
}


def family_instance(name: str, param=None) -> MultiTilingInstance:
    """Look up a family member by CLI name (``example1``, ``octA``, ``decagon`` ...)."""
    if name == "example1":
        return example1_octagon()
    if name == "decagon":
        if param is None:
            raise ParamOutOfRange("decagon needs a vertex parameter")
        return decagon_instance(param)
    try:
        ctor = FAMILY_CONSTRUCTORS[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}") from None
    if param is None:
        raise ParamOutOfRange(f"{name} needs a parameter")
    return ctor(param)


# --------------------------------------------------------------------------
# Linear equivalence


def _labelings(n: int):
    """(offset, reflected) pairs in tie-break order: offset first, plain first."""
    for o in range(n):
        for r in (False, True):
            yield o, r


def _relabel_index(i: int, o: int, r: bool, n: int) -> int:
    return (o - i) % n if r else (o + i) % n


def _map_pair(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> Optional[Mat2]:
    src = Mat2.from_columns(p0, p1)
    if src.det == 0:
        return None
    return Mat2.from_columns(q0, q1) @ src.inverse()


def _equivalences(P: ConvexPolygon, Q: ConvexPolygon):
    """Yield ``(offset, reflected, M)`` with ``M P = Q`` vertex by vertex."""
    v, w = P.vertices, Q.vertices
    n = len(v)
    if len(w) != n:
        return
    for o, r in _labelings(n):
        M = _map_pair(v[0], v[1], w[_relabel_index(0, o, r, n)], w[_relabel_index(1, o, r, n)])
        if M is None or M.det == 0:
            continue
        if all(M.apply(v[i]) == w[_relabel_index(i, o, r, n)] for i in range(n)):
            yield o, r, M


def affine_equivalence(P: ConvexPolygon, Q: ConvexPolygon) -> Optional[Mat2]:
    """A linear map taking ``P`` onto ``Q``, or ``None``.

    Both polygons must be centred at the origin.
    """
    for c in (centrally_symmetric_center(P), centrally_symmetric_center(Q)):
        if c != ORIGIN:
            raise InvalidInstance("affine_equivalence needs polygons centred at the origin")
    for _, _, M in _equivalences(P, Q):
        return M
    return None


# --------------------------------------------------------------------------
# Five-fold family classification


@dataclass(frozen=True)
class FamilyMatch:
    """Outcome of :func:`classify_fivefold_family`.

    ``param`` is the canonical parameter, ``params`` every (family, parameter)
    pair the polygon is linearly equivalent to, and ``transform`` maps the
    recentred polygon onto the canonical family member.
    """

    kind: str
    family: Optional[str] = None
    param: object = None
    params: tuple = ()
    transform: Optional[Mat2] = None
    offset: int = 0
    reflected: bool = False

    def to_dict(self) -> dict:
        from .serialize import encode

        out = {"kind": self.kind}
        if self.family is not None:
            out["family"] = self.family
            out["param"] = encode(self.param)
            out["equivalent"] = [[f, encode(p)] for f, p in self.params]
        if self.transform is not None:
            out["transform"] = encode(self.transform)
        return out


# (family name, half vertex list as functions of the parameter, range test)
_OCTAGON_FAMILIES = [
    ("octA", octagon_alpha, lambda t: 0 < t < F(1, 4)),
    ("octB", octagon_beta, lambda t: F(1, 4) < t < F(1, 3)),
    ("octAp", octagon_alpha_prime, lambda t: 0 < t < F(2, 3)),
    ("octBp", octagon_beta_prime, lambda t: 0 < t <= 1),
]


def _family_vertices(ctor, t) -> list[Vec2]:
    # constructors validate their range, so build the raw polygon directly
    name = ctor.__name__
    if name == "octagon_alpha":
        half = [(-t, F(-3, 2)), (1 - t, F(-3, 2)), (1 + t, F(-1, 2)), (1 - t, F(1, 2))]
    elif name == "octagon_beta":
        half = [(t, -2), (1 + t, -2), (1 - t, 0), (t, 1)]
    elif name == "octagon_alpha_prime":
        half = [(F(3, 2) - 5 * t / 4, -2), (F(-1, 2) - 5 * t / 4, -2), (t / 4 - F(3, 2), 0), (t / 4 - F(3, 2), 1)]
    else:
        half = [(2 - t, -3), (-t, -3), (-2, -1), (-2, 1)]
    pts = [vec(*p) for p in half]
    return pts + [-p for p in pts]


def _rational_roots(c0: Fraction, c1: Fraction, c2: Fraction) -> Optional[list[Fraction]]:
    """Rational roots of c2 t^2 + c1 t + c0; ``None`` for the zero polynomial."""
    if c2 == 0:
        if c1 == 0:
            return None if c0 == 0 else []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    rn, rd = math.isqrt(disc.numerator), math.isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        return []
    s = F(rn, rd)
    return sorted({(-c1 + s) / (2 * c2), (-c1 - s) / (2 * c2)})


def _octagon_candidates(P: ConvexPolygon, ctor) -> set[Fraction]:
    """Parameters t for which some labelling of ``P`` matches the family shape.

    With v3 = a v1 + b v2 written in the basis of two adjacent vertices, each
    coordinate is a ratio of 2x2 determinants, so matching it against the
    family is a polynomial equation of degree at most two in t.
    """
    v = P.vertices
    n = len(v)
    found: set[Fraction] = set()

    def poly(fn):
        # fn(t) is a quadratic in t: recover coefficients from three samples
        y0, y1, y2 = fn(F(0)), fn(F(1)), fn(F(2))
        c2 = (y2 - 2 * y1 + y0) / 2
        c1 = y1 - y0 - c2
        return y0, c1, c2

    for o, r in _labelings(n):
        w = [v[_relabel_index(i, o, r, n)] for i in range(n)]
        base = w[0].cross(w[1])
        coords = []
        for k in (2, 3):
            # w_k = a w_0 + b w_1 with a = (w_k x w_1)/(w_0 x w_1), b = (w_0 x w_k)/(w_0 x w_1)
            coords.append((w[k].cross(w[1]) / base, w[0].cross(w[k]) / base))
        eqs = []
        for idx, k in enumerate((2, 3)):
            a0, b0 = coords[idx]

            def ea(t, k=k, a0=a0):
                f = _family_vertices(ctor, t)
                return f[k].cross(f[1]) - a0 * f[0].cross(f[1])

            def eb(t, k=k, b0=b0):
                f = _family_vertices(ctor, t)
                return f[0].cross(f[k]) - b0 * f[0].cross(f[1])

            eqs += [poly(ea), poly(eb)]
        candidates = None
        for c0, c1, c2 in eqs:
            roots = _rational_roots(c0, c1, c2)
            if roots is None:
                continue
            candidates = set(roots) if candidates is None else candidates & set(roots)
        if candidates:
            found |= candidates
    return found


def _octagon_matches(P: ConvexPolygon) -> list[tuple[str, Fraction, Mat2]]:
    out = []
    for name, ctor, in_range in _OCTAGON_FAMILIES:
        for t in sorted(_octagon_candidates(P, ctor)):
            if not in_range(t):
                continue
            target = ConvexPolygon(_family_vertices(ctor, t))
            M = affine_equivalence(target, P)
            if M is not None:
                out.append((name, t, M.inverse()))
    return out


def _decagon_match(P: ConvexPolygon):
    v = P.vertices
    n = len(v)
    u = DECAGON_MIDPOINTS
    for o, r in _labelings(n):
        w = [v[_relabel_index(i, o, r, n)] for i in range(n)]
        mids = [(w[i] + w[(i + 1) % n]) / 2 for i in range(n)]
        M = _map_pair(mids[0], mids[1], u[0], u[1])
        if M is None or M.det == 0:
            continue
        if any(M.apply(mids[i]) != u[i] for i in range(n)):
            continue
        image = [M.apply(p) for p in w]
        for p in image:
            if point_in_polygon(W_REGION, p).location is Location.INTERIOR:
                return p, M, o, r
    return None


def classify_fivefold_family(P: ConvexPolygon) -> Optional[FamilyMatch]:
    """Place ``P`` in the list of five-fold lattice tiles up to affine maps."""
    c = centrally_symmetric_center(P)
    if c is None:
        return None
    P = P.translate(-c) if c != ORIGIN else P
    if P.n == 4:
        return FamilyMatch("Parallelogram")
    if P.n == 6:
        return FamilyMatch("CSHexagon")
    if P.n == 8:
        matches = _octagon_matches(P)
        if not matches:
            return None
        # first family in listing order, then its largest parameter
        order = [f for f, _, _ in _OCTAGON_FAMILIES]
        best = min(matches, key=lambda m: (order.index(m[0]), -m[1]))
        params = tuple(sorted({(f, t) for f, t, _ in matches}, key=lambda m: (order.index(m[0]), m[1])))
        return FamilyMatch("OctagonFamily", best[0], best[1], params, best[2])
    if P.n == 10:
        hit = _decagon_match(P)
        if hit is None:
            return None
        v1, M, o, r = hit
        return FamilyMatch("DecagonFamily", "decagon", v1, (("decagon", v1),), M, o, r)
    return None


# --------------------------------------------------------------------------
# Heuristic search for a small fold


def _integer_hnf_matrices(j: int):
    """Upper triangular [[a, b], [0, d]] with a*d = j and 0 <= b < d."""
    for a in range(1, j + 1):
        if j % a:
            continue
        d = j // a
        for b in range(d):
            yield a, b, d


def lattice_multiplicity_search(P: ConvexPolygon, pool_bound: int = 4):
    """Best-effort smallest fold over lattices that pass Bolle's criterion.

    Every passing lattice must contain, for each pair of opposite edges,
    either the edge vector or the doubled edge midpoint. The search picks one
    of the two for every pair, takes the lattice they generate, and tries all
    of its superlattices of index at most ``pool_bound``. The answer is an
    upper bound on the smallest lattice fold, never a proof of minimality.

    Returns ``(lattice, fold)`` or ``None``.
    """
    c = centrally_symmetric_center(P)
    if c is None:
        return None
    P = P.translate(-c) if c != ORIGIN else P
    half = P.n // 2
    options = [(P.edge_vectors[i], P.midpoints[i] * 2) for i in range(half)]
    seen: set = set()
    best = None
    for choice in itertools.product((0, 1), repeat=half):
        S = [options[i][k] for i, k in enumerate(choice)]
        if all(S[0].cross(s) == 0 for s in S):
            continue
        base = Lattice2(*hermite_basis(S))
        B = base.matrix
        for j in range(1, pool_bound + 1):
            for a, b, d in _integer_hnf_matrices(j):
                H = Mat2.of(a, b, 0, d)
                C = B @ H.inverse()
                L = Lattice2(vec(C.a, C.c), vec(C.b, C.d))
                key = L.hnf_basis()
                if key in seen:
                    continue
                seen.add(key)
                res = bolle_check(P, L)
                if not res.passed:
                    continue
                rank = (res.fold, tuple((v.x, v.y) for v in key))
                if best is None or rank < best[0]:
                    best = (rank, L)
    if best is None:
        return None
    (fold, _), L = best
    return Lattice2(*L.hnf_basis()), fold

