"""Newton polytopes of the corner system and their mixed volume.

The generators ``g1 .. g4`` of a degree ``m`` curve have Newton polytopes in a
small family obtained from the simplex ``m * Delta`` by cutting with
hyperplanes parallel to ``x3 + x4 = 0``:

* ``P0(m)``       -- the simplex ``m * Delta``
* ``P1(m, l)``    -- ``P0(m)`` with ``x3 + x4 >= l``
* ``P2(m, l, k)`` -- ``P1(m, l)`` with ``x3 + x4 <= k``

The lambda-scaled Minkowski sum of the four Newton polytopes is again a
``P2`` polytope, whose volume is a polynomial in the scalings.  The
coefficient of ``l1*l2*l3*l4`` is the mixed volume, the BKK root count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .poly import MultiPoly

Point = tuple[int, ...]
Halfspace = tuple[tuple[int, int, int, int], int]  # (a, b) meaning a . x <= b


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return sign * result


def _affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine hull, computed exactly."""
    if not points:
        return -1
    base = points[0]
    rows = [[Fraction(p - q) for p, q in zip(pt, base)] for pt in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class LatticePolytopeP:
    kind: str
    m: int
    l: int = 0
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("P0", "P1", "P2"):
            raise ValueError(f"unknown polytope kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.kind in ("P1", "P2") and not 0 < self.l < self.m:
            raise ValueError(f"{self.kind} needs 0 < l < m, got l={self.l}, m={self.m}")
        if self.kind == "P2" and not self.l < self.k < self.m:
            raise ValueError(f"P2 needs l < k < m, got l={self.l}, k={self.k}, m={self.m}")

    @property
    def halfspaces(self) -> list[Halfspace]:
        hs: list[Halfspace] = [
            ((-1, 0, 0, 0), 0),
            ((0, -1, 0, 0), 0),
            ((0, 0, -1, 0), 0),
            ((0, 0, 0, -1), 0),
            ((1, 1, 1, 1), self.m),
        ]
        if self.kind in ("P1", "P2"):
            hs.append(((0, 0, -1, -1), -self.l))
        if self.kind == "P2":
            hs.append(((0, 0, 1, 1), self.k))
        return hs

    @property
    def vertices(self) -> list[Point]:
        if self.kind == "P0":
            m = self.m
            return [(0, 0, 0, 0), (m, 0, 0, 0), (0, m, 0, 0), (0, 0, m, 0), (0, 0, 0, m)]
        if self.kind == "P1":
            return p1_vertices(self.m, self.l)
        return p2_vertices(self.m, self.l, self.k)

    def contains(self, x: Sequence) -> bool:
        return all(sum(a * v for a, v in zip(normal, x)) <= b for normal, b in self.halfspaces)

    def tight_facets(self, x: Sequence) -> list[int]:
        """Indices of halfspaces holding with equality at ``x``."""
        return [i for i, (normal, b) in enumerate(self.halfspaces)
                if sum(a * v for a, v in zip(normal, x)) == b]

    def volume(self) -> Fraction:
        if self.kind == "P0":
            return Fraction(self.m ** 4, 24)
        if self.kind == "P1":
            return volume_p1(self.m, self.l)
        return volume_p2(self.m, self.l, self.k)

    def __str__(self):
        args = {"P0": (self.m,), "P1": (self.m, self.l), "P2": (self.m, self.l, self.k)}[self.kind]
        return f"{self.kind}({', '.join(map(str, args))})"


def _check_range(m: int, l: int, k: int | None = None) -> None:
    if m < 4:
        raise ValueError("vertex descriptions need m >= 4")
    if not 0 < l < m:
        raise ValueError(f"need 0 < l < m, got l={l}, m={m}")
    if k is not None and not l < k < m:
        raise ValueError(f"need l < k < m, got l={l}, k={k}, m={m}")


def p1_vertices(m: int, l: int) -> list[Point]:
    """Vertices 1..8 of ``P1(m, l)`` in the standard labeling."""
    _check_range(m, l)
    r = m - l
    return [
        (0, 0, l, 0), (r, 0, l, 0), (0, r, l, 0), (0, 0, m, 0),
        (0, 0, 0, l), (r, 0, 0, l), (0, r, 0, l), (0, 0, 0, m),
    ]


def p2_vertices(m: int, l: int, k: int) -> list[Point]:
    """Vertices 1..12 of ``P2(m, l, k)`` in the standard labeling."""
    _check_range(m, l, k)
    r, s = m - l, m - k
    return [
        (0, 0, l, 0), (r, 0, l, 0), (0, r, l, 0),
        (0, 0, k, 0), (s, 0, k, 0), (0, s, k, 0),
        (0, 0, 0, l), (r, 0, 0, l), (0, r, 0, l),
        (0, 0, 0, k), (s, 0, 0, k), (0, s, 0, k),
    ]


def shape_of_generator(i: int, m: int) -> LatticePolytopeP:
    """Newton polytope of ``g_i`` for a generic curve of degree ``m``."""
    if m < 4:
        raise ValueError("the P1/P2 shapes are only full-dimensional for m >= 4")
    if i not in (1, 2, 3, 4):
        raise ValueError("generator index must be in 1..4")
    if i == 4:
        return LatticePolytopeP("P0", m)
    even = m % 2 == 0
    if i == 1:
        return LatticePolytopeP("P1", m, 2) if even else LatticePolytopeP("P2", m, 2, m - 1)
    return LatticePolytopeP("P2", m, 1, m - 1) if even else LatticePolytopeP("P1", m, 1)


def newton_matches(p: MultiPoly, P: LatticePolytopeP) -> bool:
    """True iff the Newton polytope of ``p`` equals ``P``.

    Every exponent must lie in ``P`` and every vertex of ``P`` must be an
    exponent; together these pin the convex hull down exactly.
    """
    if p.nvars != 4:
        raise ValueError("expected a polynomial in four variables")
    support = p.support()
    if not support:
        return False
    if not all(P.contains(e) for e in support):
        return False
    return all(v in support for v in P.vertices)


# -- triangulation and volumes -------------------------------------------

Simplex4 = tuple[Point, Point, Point, Point, Point]


def simplex_volume(S: Sequence[Point]) -> Fraction:
    """``|det(v1 - v0, ..., vn - v0)| / n!``; zero for degenerate input."""
    v0 = S[0]
    n = len(v0)
    if len(S) != n + 1:
        raise ValueError(f"an {n}-simplex needs {n + 1} vertices")
    rows = [[a - b for a, b in zip(v, v0)] for v in S[1:]]
    return abs(det(rows)) / factorial(n)


def cohen_hickey_triangulation(P: LatticePolytopeP) -> list[tuple[int, ...]]:
    """Triangulate ``P`` by coning from its first vertex over opposing facets.

    Returns simplices as sorted tuples of 1-based vertex labels.  Each face is
    handled recursively: pick its lowest-labeled vertex, triangulate the
    faces of one dimension lower that avoid it, and cone.
    """
    verts = P.vertices
    incid = [set(P.tight_facets(v)) for v in verts]
    n_facets = len(P.halfspaces)
    facet_sets = [frozenset(i for i in range(len(verts)) if f in incid[i])
                  for f in range(n_facets)]

    def dim(labels) -> int:
        return _affine_rank([verts[i] for i in sorted(labels)])

    def triangulate(face: frozenset, d: int) -> list[tuple[int, ...]]:
        if len(face) == d + 1:
            return [tuple(sorted(face))]
        apex = min(face)
        subfaces = []
        for fs in facet_sets:
            sub = face & fs
            if apex in sub or sub in subfaces:
                continue
            if len(sub) >= d and dim(sub) == d - 1:
                subfaces.append(sub)
        out = []
        for sub in subfaces:
            for simplex in triangulate(sub, d - 1):
                out.append(tuple(sorted((apex,) + simplex)))
        return out

    full = frozenset(range(len(verts)))
    simplices = triangulate(full, dim(full))
    return sorted(tuple(i + 1 for i in s) for s in simplices)


def triangulation_volume(P: LatticePolytopeP) -> Fraction:
    verts = P.vertices
    return sum((simplex_volume([verts[i - 1] for i in s])
                for s in cohen_hickey_triangulation(P)), Fraction(0))


def volume_p1(m, l) -> Fraction:
    """Volume of ``P1(m, l)``; ``l = 0`` gives the simplex ``m * Delta``."""
    if isinstance(m, int) and isinstance(l, int) and not 0 <= l < m:
        raise ValueError(f"need 0 <= l < m, got l={l}, m={m}")
    return Fraction((m - l) ** 3 * (m + 3 * l), 24)


def volume_p2(m, l, k) -> Fraction:
    if not 0 <= l < k < m:
        raise ValueError(f"need 0 <= l < k < m, got l={l}, k={k}, m={m}")
    return volume_p1(m, l) - volume_p1(m, k)


# -- Minkowski sum -------------------------------------------------------

LAMBDA_NAMES = ("l1", "l2", "l3", "l4")


def _lam(i: int) -> MultiPoly:
    return MultiPoly.variable(i, 4)


@dataclass(frozen=True)
class MinkowskiParams:
    """``mu1 * P1(m, l1) + mu2 * P2(m, l2, k) + l4 * m * Delta = P2(m', l', k')``."""

    m: int
    l1: int
    l2: int
    k: int
    mu1: MultiPoly
    mu2: MultiPoly
    m_prime: MultiPoly
    l_prime: MultiPoly
    k_prime: MultiPoly

    def evaluate(self, scalings: Sequence[int]) -> tuple[int, int, int]:
        """Integer ``(m', l', k')`` for concrete scalings."""
        return tuple(int(p.evaluate(scalings)) for p in (self.m_prime, self.l_prime, self.k_prime))


def minkowski_params(m: int) -> MinkowskiParams:
    if m < 4:
        raise ValueError("closed-form Minkowski sum needs m >= 4")
    lam1, lam2, lam3, lam4 = (_lam(i) for i in range(4))
    if m % 2 == 0:
        mu1, mu2 = lam1, lam2 + lam3
        p1, p2 = shape_of_generator(1, m), shape_of_generator(2, m)
    else:
        mu1, mu2 = lam2 + lam3, lam1
        p1, p2 = shape_of_generator(2, m), shape_of_generator(1, m)
    m_prime = (mu1 + mu2 + lam4) * m
    l_prime = mu1 * p1.l + mu2 * p2.l
    k_prime = (mu1 + lam4) * m + mu2 * p2.k
    return MinkowskiParams(m, p1.l, p2.l, p2.k, mu1, mu2, m_prime, l_prime, k_prime)


def minkowski_volume_poly(m: int) -> MultiPoly:
    """Volume of ``sum_i lambda_i N(g_i)`` as a quartic in the lambdas."""
    mp = minkowski_params(m)
    M, L, K = mp.m_prime, mp.l_prime, mp.k_prime
    vol = (M - L) ** 3 * (M + 3 * L) - (M - K) ** 3 * (M + 3 * K)
    return vol / 24


def mixed_volume_closed_form(m: int) -> int:
    return m ** 4 - 5 * m ** 2 + 4 * m


def mixed_volume(m: int) -> int:
    """Mixed volume of the Newton polytopes of ``g1 .. g4`` for degree ``m``.

    For ``m >= 4`` it is extracted from :func:`minkowski_volume_poly`; for
    smaller degrees the polytopes are not full-dimensional and the closed
    form is used.
    """
    if m < 1:
        raise ValueError("degree must be positive")
    closed = mixed_volume_closed_form(m)
    if m < 4:
        return closed
    mv = minkowski_volume_poly(m).coefficient((1, 1, 1, 1))
    if mv != closed:
        raise ArithmeticError(f"mixed volume {mv} disagrees with closed form {closed} at m={m}")
    return int(mv)


def inscribed_bound(m: int) -> int:
    """Maximum number of isolated squares on a degree ``m`` curve."""
    mv = mixed_volume(m)
    return mv // 4


def bezout_number(m: int) -> int:
    return m ** 4


def newton_polytopes(m: int) -> list[LatticePolytopeP]:
    return [shape_of_generator(i, m) for i in (1, 2, 3, 4)]


def paired_minkowski_vertices(m: int, scalings: Sequence[int]) -> tuple[LatticePolytopeP, list[Point]]:
    """Vertices of ``sum s_i N(g_i)`` assembled by normal-cone pairing.

    For each vertex of the predicted sum ``P2(m', l', k')`` a direction inside
    its normal cone (the sum of its outward facet normals) is maximized over
    every summand separately, and the maximizers are added up.  Raises if a
    summand has a tie, which would mean its normal fan is not coarser.
    """
    if any(s <= 0 for s in scalings):
        raise ValueError("scalings must be positive")
    mp = minkowski_params(m)
    target = LatticePolytopeP("P2", *mp.evaluate(scalings))
    summands = newton_polytopes(m)
    hs = target.halfspaces
    out = []
    for v in target.vertices:
        direction = [0, 0, 0, 0]
        for f in target.tight_facets(v):
            direction = [a + b for a, b in zip(direction, hs[f][0])]
        total = [0, 0, 0, 0]
        for s, P in zip(scalings, summands):
            scores = [sum(a * b for a, b in zip(direction, w)) for w in P.vertices]
            best = max(scores)
            winners = [w for w, sc in zip(P.vertices, scores) if sc == best]
            if len(winners) != 1:
                raise ArithmeticError(f"direction {direction} is not generic for {P}")
            total = [t + s * x for t, x in zip(total, winners[0])]
        out.append(tuple(total))
    return target, out


def minkowski_support_vertices(m: int, scalings: Sequence[int],
                               directions: Sequence[Sequence[float]]) -> set[Point]:
    """Maximizers of ``sum s_i N(g_i)`` along the given directions.

    Uses only that the support function of a Minkowski sum is the sum of the
    summands' support functions.
    """
    summands = newton_polytopes(m)
    found = set()
    for w in directions:
        total = [0, 0, 0, 0]
        for s, P in zip(scalings, summands):
            best = max(P.vertices, key=lambda v: sum(a * b for a, b in zip(w, v)))
            total = [t + s * x for t, x in zip(total, best)]
        found.add(tuple(total))
    return found


# -- planar mixed area ---------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Sequence) -> list[tuple]:
    """Monotone chain hull, counterclockwise, without collinear points."""
    pts = sorted({(Fraction(x), Fraction(y)) for x, y in points})
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(poly: Sequence) -> Fraction:
    n = len(poly)
    if n < 3:
        return Fraction(0)
    s = sum(Fraction(poly[i][0]) * Fraction(poly[(i + 1) % n][1])
            - Fraction(poly[(i + 1) % n][0]) * Fraction(poly[i][1]) for i in range(n))
    return abs(s) / 2


def _check_convex(poly: Sequence) -> None:
    n = len(poly)
    if n < 3:
        return
    signs = set()
    for i in range(n):
        c = _cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n])
        if c:
            signs.add(c > 0)
    if len(signs) > 1:
        raise ValueError("polygon is not convex")
    # a star polygon turns consistently but winds more than once
    if polygon_area(poly) != polygon_area(convex_hull_2d(poly)):
        raise ValueError("polygon is not convex")


def minkowski_sum_2d(P: Sequence, Q: Sequence) -> list[tuple]:
    return convex_hull_2d([(p[0] + q[0], p[1] + q[1]) for p in P for q in Q])


def mixed_area_2d(P: Sequence, Q: Sequence) -> Fraction:
    """Coefficient of ``l1*l2`` in ``area(l1 P + l2 Q)``.

    Polygons are vertex lists in boundary order; segments and points are
    allowed.
    """
    _check_convex(P)
    _check_convex(Q)
    return polygon_area(minkowski_sum_2d(P, Q)) - polygon_area(convex_hull_2d(P)) \
        - polygon_area(convex_hull_2d(Q))
