"""SVG pictures of a curve together with its real inscribed squares.

The curve is traced with marching squares on a regular grid; squares are
drawn as closed 4-gons.  Coordinates are written in curve units inside a
flipped group so the numbers in the file can be compared with a report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .homotopy import HomotopySettings, solve_system
from .poly import CurveF, MultiPoly

SQUARE_COLORS = ("navy", "orange", "plum", "cyan", "blue", "green", "black",
                 "maroon", "gold", "brown", "pink", "coral", "magenta", "khaki")
CURVE_COLOR = "red"


@dataclass(frozen=True)
class RenderSpec:
    xrange: tuple[float, float] | None = None
    yrange: tuple[float, float] | None = None
    grid: int = 200
    curve_color: str = CURVE_COLOR
    colors: tuple[str, ...] = SQUARE_COLORS
    width: int = 600

    def __post_init__(self):
        if self.grid < 16:
            raise ValueError("grid resolution must be at least 16")
        for r in (self.xrange, self.yrange):
            if r is not None and not r[0] < r[1]:
                raise ValueError(f"empty range {r}")


def evaluate_grid(poly: MultiPoly, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    out = np.zeros(np.broadcast(X, Y).shape)
    for (i, j), c in poly.items():
        out += float(c) * X ** i * Y ** j
    return out


# edges of a cell: 0 bottom, 1 right, 2 top, 3 left; corners 0 (i,j) 1 (i+1,j) 2 (i+1,j+1) 3 (i,j+1)
_CASES = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    3: ((3, 1),), 12: ((3, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    6: ((0, 2),), 9: ((0, 2),),
    7: ((3, 2),), 8: ((3, 2),),
}


def marching_squares(values: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                     center: np.ndarray | None = None) -> list[list[tuple[float, float]]]:
    """Zero contour of ``values[i, j] = f(xs[i], ys[j])`` as polylines.

    Saddle cells are resolved with ``center`` (values at cell centers) when
    given.  Contour points are identified by the grid edge they lie on, which
    lets segments be chained into polylines without float comparisons.
    """
    nx, ny = values.shape
    inside = values > 0

    def point(key):
        kind, i, j = key
        if kind == "h":
            v0, v1 = values[i, j], values[i + 1, j]
            t = v0 / (v0 - v1)
            return (xs[i] + t * (xs[i + 1] - xs[i]), ys[j])
        v0, v1 = values[i, j], values[i, j + 1]
        t = v0 / (v0 - v1)
        return (xs[i], ys[j] + t * (ys[j + 1] - ys[j]))

    def edge_key(i, j, e):
        return (("h", i, j), ("v", i + 1, j), ("h", i, j + 1), ("v", i, j))[e]

    links: dict[tuple, list[tuple]] = {}
    for i in range(nx - 1):
        for j in range(ny - 1):
            idx = (inside[i, j] * 1 | inside[i + 1, j] * 2
                   | inside[i + 1, j + 1] * 4 | inside[i, j + 1] * 8)
            if idx in (5, 10):
                c = center[i, j] > 0 if center is not None else True
                if (idx == 5) == c:
                    pairs = ((3, 2), (0, 1))
                else:
                    pairs = ((3, 0), (1, 2))
            else:
                pairs = _CASES[idx]
            for e0, e1 in pairs:
                a, b = edge_key(i, j, e0), edge_key(i, j, e1)
                links.setdefault(a, []).append(b)
                links.setdefault(b, []).append(a)

    seen_edges: set[frozenset] = set()
    lines = []
    # open chains first (start at degree-1 keys), then closed loops
    starts = sorted(k for k, v in links.items() if len(v) == 1) + sorted(links)
    for s in starts:
        for nxt in links[s]:
            if frozenset((s, nxt)) in seen_edges:
                continue
            chain = [s]
            prev, cur = s, nxt
            seen_edges.add(frozenset((prev, cur)))
            while True:
                chain.append(cur)
                options = [k for k in links[cur] if frozenset((cur, k)) not in seen_edges]
                if not options:
                    break
                prev, cur = cur, options[0]
                seen_edges.add(frozenset((prev, cur)))
            pts = [point(k) for k in chain]
            # a contour through a grid node is reached from two edges
            pts = [p for n, p in enumerate(pts) if n == 0 or p != pts[n - 1]]
            if len(pts) > 1:
                lines.append(pts)
    return lines


def contour(f: CurveF, xrange: Sequence[float], yrange: Sequence[float],
            grid: int) -> list[list[tuple[float, float]]]:
    xs = np.linspace(xrange[0], xrange[1], grid + 1)
    ys = np.linspace(yrange[0], yrange[1], grid + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals = evaluate_grid(f.poly, X, Y)
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    CX, CY = np.meshgrid(cx, cy, indexing="ij")
    centers = evaluate_grid(f.poly, CX, CY)
    return marching_squares(vals, xs, ys, centers)


def curve_sample_points(f: CurveF, seed: int = 0) -> list[tuple[float, float]]:
    """Real points of the curve that bound its compact pieces.

    These are the critical points of the two coordinate projections (found by
    solving ``f = df/dy = 0`` and ``f = df/dx = 0``) plus the intersections
    with the coordinate axes.
    """
    pts = []
    settings = HomotopySettings(seed=seed)
    poly = f.poly
    for j in (1, 0):
        deriv = poly.derivative(j)
        if deriv.is_zero() or poly.degree < 2:
            continue
        try:
            results = solve_system([poly, deriv], settings)
        except ValueError:
            continue
        for r in results:
            if r.finite and r.residual < 1e-8:
                x, y = r.endpoint
                if abs(x.imag) < 1e-7 and abs(y.imag) < 1e-7:
                    pts.append((float(x.real), float(y.real)))
    for axis in (0, 1):
        # f(x, 0) or f(0, y) as a univariate polynomial
        coeffs = {}
        for (i, j), c in poly.items():
            if (j if axis == 0 else i) == 0:
                k = i if axis == 0 else j
                coeffs[k] = coeffs.get(k, 0) + float(c)
        if not coeffs or max(coeffs) == 0:
            continue
        top = max(coeffs)
        roots = np.roots([coeffs.get(k, 0.0) for k in range(top, -1, -1)])
        for r in roots:
            if abs(r.imag) < 1e-9:
                pts.append((float(r.real), 0.0) if axis == 0 else (0.0, float(r.real)))
    return sorted(set((round(x, 12), round(y, 12)) for x, y in pts))


def auto_viewport(square_corners: Sequence[Sequence[tuple[float, float]]],
                  curve_points: Sequence[tuple[float, float]]):
    xs = [p[0] for sq in square_corners for p in sq] + [p[0] for p in curve_points]
    ys = [p[1] for sq in square_corners for p in sq] + [p[1] for p in curve_points]
    if not xs:
        xs = ys = [0.0]
    return ((-1 + math.floor(min(xs)), 1 + math.ceil(max(xs))),
            (-1 + math.floor(min(ys)), 1 + math.ceil(max(ys))))


def _num(v: float) -> str:
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def render_svg(f: CurveF, squares: Sequence[Sequence[tuple[float, float]]],
               spec: RenderSpec = RenderSpec(), caption: str | None = None,
               curve_points: Sequence[tuple[float, float]] | None = None) -> str:
    """SVG text for the curve and the given squares (corner lists)."""
    if spec.xrange is None or spec.yrange is None:
        auto_x, auto_y = auto_viewport(squares, curve_points if curve_points is not None
                                       else curve_sample_points(f))
        xr = spec.xrange or auto_x
        yr = spec.yrange or auto_y
    else:
        xr, yr = spec.xrange, spec.yrange
    if not (xr[0] < xr[1] and yr[0] < yr[1]):
        raise ValueError("empty viewport")
    w = spec.width
    scale = w / (xr[1] - xr[0])
    h = int(round((yr[1] - yr[0]) * scale))
    cap_h = 30
    lines = contour(f, xr, yr, spec.grid)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h + cap_h}" '
        f'viewBox="0 0 {w} {h + cap_h}">',
        f'<rect x="0" y="0" width="{w}" height="{h + cap_h}" fill="white"/>',
        f'<g id="plot" transform="matrix({_num(scale)} 0 0 {_num(-scale)} '
        f'{_num(-xr[0] * scale)} {_num(yr[1] * scale)})">',
        f'<g id="curve" fill="none" stroke="{spec.curve_color}" stroke-width="1.5" '
        'vector-effect="non-scaling-stroke">',
    ]
    for line in lines:
        d = " ".join(f"{'M' if i == 0 else 'L'}{_num(x)} {_num(y)}" for i, (x, y) in enumerate(line))
        out.append(f'<path d="{d}" vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    out.append('<g id="squares" fill="none" stroke-width="2">')
    for n, sq in enumerate(squares):
        color = spec.colors[n % len(spec.colors)]
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in sq)
        out.append(f'<polygon class="square" points="{pts}" stroke="{color}" '
                   'vector-effect="non-scaling-stroke"/>')
    out.append("</g>")
    out.append("</g>")
    if caption is None:
        caption = f"{f} inscribing {len(squares)} squares."
    out.append(f'<text x="{w / 2:g}" y="{h + 20}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="14">{_escape(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
