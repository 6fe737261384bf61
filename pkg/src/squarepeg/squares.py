"""Square parametrization and the corner system of a plane curve.

A tuple ``(a, b, c, d)`` describes the square with center ``(a, b)`` whose
corners are ``(a + c, b + d), (a + d, b - c), (a - c, b - d), (a - d, b + c)``.
Substituting the corners into ``f`` gives four polynomials in ``a, b, c, d``;
the module rewrites them into the sparser combinations ``g1 .. g4``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, NamedTuple, Sequence

from .poly import CurveF, Exponent, MultiPoly


class SquareParam(NamedTuple):
    a: complex
    b: complex
    c: complex
    d: complex


def corners(sq: Sequence) -> list[tuple]:
    a, b, c, d = sq
    return [(a + c, b + d), (a + d, b - c), (a - c, b - d), (a - d, b + c)]


def _lin(*coeffs) -> MultiPoly:
    return MultiPoly.linear(coeffs)


# (x, y) substitutions, in corner order.
CORNER_FORMS: tuple[tuple[MultiPoly, MultiPoly], ...] = (
    (_lin(1, 0, 1, 0), _lin(0, 1, 0, 1)),    # (a + c, b + d)
    (_lin(1, 0, 0, 1), _lin(0, 1, -1, 0)),   # (a + d, b - c)
    (_lin(1, 0, -1, 0), _lin(0, 1, 0, -1)),  # (a - c, b - d)
    (_lin(1, 0, 0, -1), _lin(0, 1, 1, 0)),   # (a - d, b + c)
)

# Rows are g1..g4.  Columns follow f(a+c, b+d), f(a-c, b-d), f(a-d, b+c),
# f(a+d, b-c), which is the order the presence formula uses.
H_MATRIX: tuple[tuple[int, int, int, int], ...] = (
    (1, 1, -1, -1),
    (1, -1, 0, 0),
    (0, 0, 1, -1),
    (0, 0, 0, 1),
)
# column j of H_MATRIX refers to naive generator H_COLUMNS[j]
H_COLUMNS = (0, 2, 3, 1)

# naive (H_COLUMNS order) = H_INVERSE @ g
H_INVERSE: tuple[tuple[Fraction, ...], ...] = (
    (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1)),
    (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(1)),
    (Fraction(0), Fraction(0), Fraction(1), Fraction(1)),
    (Fraction(0), Fraction(0), Fraction(0), Fraction(1)),
)


def substitute_corner(f: CurveF, x_expr: MultiPoly, y_expr: MultiPoly) -> MultiPoly:
    """Expand ``f(x_expr, y_expr)``."""
    return f.poly.substitute([x_expr, y_expr])


def naive_generators(f: CurveF) -> list[MultiPoly]:
    """``f`` evaluated at the four corners, in corner order."""
    return [substitute_corner(f, x, y) for x, y in CORNER_FORMS]


@dataclass(frozen=True)
class CornerSystem:
    m: int
    naive: tuple[MultiPoly, ...]
    g: tuple[MultiPoly, ...]
    h: tuple[tuple[int, ...], ...] = H_MATRIX

    def reconstruct_naive(self) -> list[MultiPoly]:
        """Recover the naive generators (corner order) from ``g``."""
        out: list[MultiPoly | None] = [None] * 4
        for row, col in zip(H_INVERSE, H_COLUMNS):
            acc = MultiPoly.zero(4)
            for coeff, gi in zip(row, self.g):
                if coeff:
                    acc = acc + gi.scale(coeff)
            out[col] = acc
        return out

    def zero_generators(self) -> list[int]:
        """1-based indices of generators that vanish identically."""
        return [i + 1 for i, gi in enumerate(self.g) if gi.is_zero()]


def rewritten_generators(f: CurveF) -> CornerSystem:
    naive = naive_generators(f)
    ordered = [naive[j] for j in H_COLUMNS]
    g = []
    for row in H_MATRIX:
        acc = MultiPoly.zero(4)
        for h, p in zip(row, ordered):
            if h:
                acc = acc + p.scale(h)
        g.append(acc)
    return CornerSystem(m=f.degree, naive=tuple(naive), g=tuple(g))


def monomial_present(i: int, gamma: Exponent) -> bool:
    """Whether ``a^g1 b^g2 c^g3 d^g4`` appears in ``g_i`` for a generic curve."""
    if i not in (1, 2, 3, 4):
        raise ValueError("generator index must be in 1..4")
    g3, g4 = gamma[2], gamma[3]
    if i == 4:
        return True
    if sum(gamma) == 0:
        return False
    odd = (g3 + g4) % 2 == 1
    if i in (2, 3):
        return odd
    return not odd and not (g3 == g4 and g3 % 2 == 0)


def presence_coefficient(gamma: Exponent, h_row: Sequence[int],
                         C: Mapping[tuple[int, int], object] | Callable[[int, int], object]):
    """Coefficient of ``a^g1 b^g2 c^g3 d^g4`` (degree >= 1) in ``sum_j h_j * naive_j``.

    ``h_row`` uses the column order of :data:`H_MATRIX`; ``C`` gives the curve
    coefficient of ``x^i y^j`` (missing entries are zero).
    """
    g1, g2, g3, g4 = gamma
    if g1 + g2 + g3 + g4 < 1:
        raise ValueError("presence_coefficient needs a monomial of degree >= 1")
    if callable(C):
        coef = C
    else:
        coef = lambda i, j: C.get((i, j), 0)  # noqa: E731
    h1, h2, h3, h4 = h_row
    first = comb(g1 + g3, g1) * comb(g2 + g4, g2) * coef(g1 + g3, g2 + g4) \
        * (h1 + h2 * (-1) ** (g3 + g4))
    second = comb(g1 + g4, g1) * comb(g2 + g3, g2) * coef(g1 + g4, g2 + g3) \
        * (h3 * (-1) ** g4 + h4 * (-1) ** g3)
    return first + second


def orbit(sq: Sequence) -> list[SquareParam]:
    """The four parameter tuples describing the same square."""
    a, b, c, d = sq
    return [SquareParam(a, b, c, d), SquareParam(a, b, d, -c),
            SquareParam(a, b, -c, -d), SquareParam(a, b, -d, c)]


def _key(sq) -> tuple[float, float, float, float]:
    c, d = complex(sq[2]), complex(sq[3])
    return (c.real, c.imag, d.real, d.imag)


def _greater(k1, k2, tol: float) -> bool:
    for u, v in zip(k1, k2):
        if abs(u - v) > tol:
            return u > v
    return False


def canonicalize(sq: Sequence, tol: float = 0.0) -> SquareParam:
    """Orbit member maximizing ``(Re c, Im c, Re d, Im d)`` lexicographically.

    Components closer than ``tol`` compare equal, which keeps the choice
    stable under numerical noise.
    """
    best = None
    best_key = None
    for member in orbit(sq):
        k = _key(member)
        if best is None or _greater(k, best_key, tol):
            best, best_key = member, k
    return best


def is_degenerate(sq: Sequence, tol: float = 1e-8) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return abs(sq[2]) + abs(sq[3]) < tol


PYTHAGOREAN_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29))


def random_rational_rotation(rng: random.Random) -> tuple[Fraction, Fraction]:
    """Random ``(cos, sin)`` pair with exact rational entries."""
    p, q, r = rng.choice(PYTHAGOREAN_TRIPLES)
    if rng.random() < 0.5:
        p, q = q, p
    return (Fraction(p, r) * rng.choice((1, -1)), Fraction(q, r) * rng.choice((1, -1)))


def transform_curve(f: CurveF, theta: float = 0.0, shift: Sequence = (0, 0),
                    rotation: tuple | None = None) -> CurveF:
    """Return ``f'(x, y) = f(R (x, y) + shift)``.

    ``R`` is the rotation by ``theta``, or given directly as an exact
    ``(cos, sin)`` pair via ``rotation``.  Float inputs are converted to exact
    binary fractions so the result stays in exact arithmetic.
    """
    if rotation is None:
        if theta == 0:
            rotation = (1, 0)
        else:
            rotation = (Fraction(math.cos(theta)), Fraction(math.sin(theta)))
    cs, sn = (Fraction(v) if isinstance(v, float) else v for v in rotation)
    tx, ty = (Fraction(v) if isinstance(v, float) else v for v in shift)
    x_expr = MultiPoly.linear((cs, -sn), tx)
    y_expr = MultiPoly.linear((sn, cs), ty)
    return CurveF(f.poly.substitute([x_expr, y_expr]))


def map_square(sq: Sequence, rotation: tuple, shift: Sequence) -> SquareParam:
    """Image of a square under ``p -> R p + shift``."""
    cs, sn = (float(v) for v in rotation)
    tx, ty = (float(v) for v in shift)
    a, b, c, d = sq
    return SquareParam(cs * a - sn * b + tx, sn * a + cs * b + ty,
                       cs * c - sn * d, sn * c + cs * d)
