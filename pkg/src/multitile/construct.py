"""Build convex polygons from angle and edge-length constraints.

The solver works on the unknowns (a_1..a_n, l_1..l_n) with the angle sum,
the user's linear relations, and the two closure equations
``sum l_k * (cos t_k, sin t_k) = 0`` where ``t_1 = 0`` and
``t_{k+1} = t_k + pi - a_k``. A Levenberg-Marquardt iteration runs at 256 bits and
the resulting vertices are rounded onto a 2**-96 grid, which keeps every
constraint residual far below the classifier tolerances.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .classifier import TILE_TYPES
from .geometry import ConvexPolygon, InvalidPolygon, Vec2

SOLVE_PREC = 256
GRID_BITS = 96


class InfeasibleConstraints(ValueError):
    pass


def _rational(x) -> Fraction:
    return Fraction(int(mpmath.nint(x * 2**GRID_BITS)), 2**GRID_BITS)


def _headings(alpha):
    theta = [mpmath.mpf(0)]
    for k in range(len(alpha) - 1):
        theta.append(theta[-1] + mpmath.pi - alpha[k])
    return theta


def construct_from_constraints(
    n: int,
    angle_relations=(),
    length_relations=(),
    fixed_angles: dict | None = None,
    fixed_lengths: dict | None = None,
    guess_angles=None,
    guess_lengths=None,
    max_iter: int = 60,
) -> ConvexPolygon:
    """Solve for a convex n-gon meeting the given relations.

    ``angle_relations`` holds pairs ``(coeffs, rhs)`` meaning
    ``sum(c * a_i) = rhs * pi``; ``length_relations`` holds coefficient maps
    meaning ``sum(c * l_i) = 0``. Indices are 1-based. ``fixed_angles`` maps an
    index to a multiple of pi, ``fixed_lengths`` an index to a length. Guesses
    are in multiples of pi (angles) and plain lengths.
    """
    fixed_angles = fixed_angles or {}
    fixed_lengths = fixed_lengths or {}
    angle_relations = [(dict(c), Fraction(r)) for c, r in angle_relations]
    angle_relations.append(({i: 1 for i in range(1, n + 1)}, Fraction(n - 2)))
    angle_relations += [({i: 1}, Fraction(v)) for i, v in fixed_angles.items()]
    length_relations = [dict(c) for c in length_relations]
    length_fixed = [(i, Fraction(v)) for i, v in fixed_lengths.items()]
    if not length_fixed:
        length_fixed = [(1, Fraction(1))]
    n_eq = len(angle_relations) + len(length_relations) + len(length_fixed) + 2
    if n_eq < 2 * n:
        raise ValueError(f"underdetermined: {n_eq} equations for {2 * n} unknowns")

    with mpmath.workprec(SOLVE_PREC):
        pi = mpmath.pi
        if guess_angles is None:
            alpha = [pi * (n - 2) / n] * n
        else:
            alpha = [pi * mpmath.mpf(a) for a in guess_angles]
        ell = [mpmath.mpf(1)] * n if guess_lengths is None else [mpmath.mpf(x) for x in guess_lengths]

        def residuals(alpha, ell):
            out = []
            for coeffs, rhs in angle_relations:
                out.append(mpmath.fsum(c * alpha[i - 1] for i, c in coeffs.items()) - rhs * pi)
            for coeffs in length_relations:
                out.append(mpmath.fsum(c * ell[i - 1] for i, c in coeffs.items()))
            for i, v in length_fixed:
                out.append(ell[i - 1] - mpmath.mpf(v.numerator) / v.denominator)
            theta = _headings(alpha)
            out.append(mpmath.fsum(ell[k] * mpmath.cos(theta[k]) for k in range(n)))
            out.append(mpmath.fsum(ell[k] * mpmath.sin(theta[k]) for k in range(n)))
            return out

        def jacobian(alpha, ell):
            rows = []
            for coeffs, _ in angle_relations:
                rows.append([coeffs.get(j + 1, 0) for j in range(n)] + [0] * n)
            for coeffs in length_relations:
                rows.append([0] * n + [coeffs.get(j + 1, 0) for j in range(n)])
            for i, _ in length_fixed:
                rows.append([0] * n + [1 if j + 1 == i else 0 for j in range(n)])
            theta = _headings(alpha)
            cs = [mpmath.cos(t) for t in theta]
            sn = [mpmath.sin(t) for t in theta]
            # heading t_k decreases by one for every a_j with j < k
            dx = [mpmath.fsum(ell[k] * sn[k] for k in range(j + 1, n)) for j in range(n)]
            dy = [-mpmath.fsum(ell[k] * cs[k] for k in range(j + 1, n)) for j in range(n)]
            rows.append(dx + cs)
            rows.append(dy + sn)
            return rows

        def cost(r):
            return mpmath.fsum(x * x for x in r)

        # Levenberg-Marquardt: the Jacobian is rank deficient at symmetric guesses
        tol = mpmath.mpf(2) ** (-SOLVE_PREC + 40)
        damping = mpmath.mpf("1e-3")
        r = residuals(alpha, ell)
        for _ in range(max_iter):
            if max(abs(x) for x in r) < tol:
                break
            J = mpmath.matrix(jacobian(alpha, ell))
            Jt = J.T
            A = Jt * J
            g = Jt * mpmath.matrix(r)
            while True:
                for d in range(2 * n):
                    A[d, d] += damping
                step = mpmath.lu_solve(A, -g)
                for d in range(2 * n):
                    A[d, d] -= damping
                new_alpha = [alpha[j] + step[j] for j in range(n)]
                new_ell = [ell[j] + step[n + j] for j in range(n)]
                new_r = residuals(new_alpha, new_ell)
                if cost(new_r) < cost(r):
                    alpha, ell, r = new_alpha, new_ell, new_r
                    damping = max(damping / 10, mpmath.mpf(2) ** (-SOLVE_PREC))
                    break
                damping *= 10
                if damping > 1e12:
                    raise InfeasibleConstraints("solver stalled")
        r = residuals(alpha, ell)
        if max(abs(x) for x in r) > mpmath.mpf(2) ** -150:
            raise InfeasibleConstraints("closure system has no solution near the guess")
        if any(a <= 0 or a >= pi for a in alpha) or any(x <= 0 for x in ell):
            raise InfeasibleConstraints("solution is not a convex polygon with positive edges")

        theta = _headings(alpha)
        pts = []
        x = y = mpmath.mpf(0)
        for k in range(n):
            x += ell[k] * mpmath.cos(theta[k])
            y += ell[k] * mpmath.sin(theta[k])
            pts.append(Vec2(_rational(x), _rational(y)))
    # w_n closes at the origin; snap it there exactly
    pts[-1] = Vec2(Fraction(0), Fraction(0))
    try:
        return ConvexPolygon(pts)
    except InvalidPolygon as exc:
        raise InfeasibleConstraints(str(exc)) from exc


# Free parameters and starting points that pin down one witness per tile type.
# Angles in multiples of pi.
F = Fraction
WITNESS_SETUP: dict[str, dict] = {
    # a1 + a2 + a3 = 2 pi makes G1 and G4 antiparallel, so they drop out of
    # the closure and l5, l6 are determined by l2, l3
    "Hex1": dict(fixed_angles={1: F(13, 18), 2: F(2, 3), 4: F(7, 12), 5: F(7, 9)},
                 fixed_lengths={1: 1, 2: F(1, 2), 3: F(9, 10)}),
    "Hex2": dict(fixed_angles={1: F(13, 18), 2: F(5, 9), 3: F(7, 9), 5: F(11, 18)},
                 fixed_lengths={1: 1, 2: F(6, 5)}),
    "Hex3": dict(fixed_angles={2: F(5, 9)}, fixed_lengths={1: 1, 3: F(6, 5)}),
    "Pent1": dict(fixed_angles={1: F(13, 18), 2: F(2, 3), 4: F(17, 36)},
                  fixed_lengths={1: 1, 2: F(1, 2), 3: F(9, 10)}),
    "Pent2": dict(fixed_angles={1: F(13, 18), 2: F(11, 18), 3: F(5, 9)},
                  fixed_lengths={1: 1, 2: F(6, 5)}),
    "Pent3": dict(fixed_lengths={1: 1, 3: F(2, 5)}),
    "Pent4": dict(fixed_angles={2: F(2, 3), 4: F(5, 9)}, fixed_lengths={1: 1}),
    "Pent5": dict(fixed_angles={2: F(11, 18), 4: F(25, 36)}, fixed_lengths={1: 1},
                  guess_lengths=[1, 1, 0.53, 0.53, 0.35]),
    "Pent6": dict(fixed_angles={1: F(5, 9)}, guess_angles=[0.55, 0.9, 0.28, 0.55, 0.72]),
    "Pent7": dict(fixed_angles={1: F(11, 18)}, guess_angles=[0.6, 0.55, 0.9, 0.7, 0.65]),
    "Pent8": dict(fixed_angles={3: F(11, 18)}, guess_angles=[0.65, 0.7, 0.6, 0.7, 0.35]),
    "Pent9": dict(fixed_angles={4: F(4, 9)}, guess_angles=[0.55, 0.72, 0.78, 0.45, 0.5],
                  guess_lengths=[1, 0.5, 0.8, 0.5, 1]),
    "Pent10": dict(fixed_angles={2: F(5, 9)}, guess_angles=[0.5, 0.55, 0.6, 0.7, 0.72]),
    "Pent11": dict(fixed_angles={2: F(37, 45)}, fixed_lengths={1: 1},
                   guess_angles=[0.5, 0.822, 0.356, 0.678, 0.644],
                   guess_lengths=[1, 4.675, 1.314, 3.314, 3.314]),
    "Pent12": dict(fixed_angles={2: F(38, 45)}, fixed_lengths={1: 1},
                   guess_angles=[0.5, 0.844, 0.311, 0.656, 0.689],
                   guess_lengths=[1, 1.461, 1.147, 2, 0.853]),
    "Pent13": dict(fixed_angles={4: F(5, 9)}, guess_angles=[0.5, 0.72, 0.5, 0.55, 0.72]),
    "Pent14": dict(guess_angles=[0.5, 0.7, 0.6, 0.8, 0.4], guess_lengths=[1, 1.5, 1, 2, 2]),
    "Pent15": dict(fixed_lengths={2: 1}, guess_lengths=[2, 1, 1.5, 1, 1]),
}


def witness_polygon(tag: str) -> ConvexPolygon:
    """A polygon satisfying the conditions of a tile type (Hex1..3, Pent1..15)."""
    if tag == "Triangle":
        return ConvexPolygon([(0, 0), (2, 0), (F(1, 2), 1)])
    if tag == "Quadrilateral":
        return ConvexPolygon([(0, 0), (3, 0), (2, 2), (F(-1, 2), 1)])
    conds = TILE_TYPES[tag]
    setup = dict(WITNESS_SETUP[tag])
    angles = [(dict(c), r) for c, r in conds.angles]
    lengths = [dict(c) for c in conds.lengths]
    return construct_from_constraints(conds.n, angles, lengths, **setup)
