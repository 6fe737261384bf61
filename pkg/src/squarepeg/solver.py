"""Counting the squares inscribed on a curve by solving its corner system."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .homotopy import HomotopySettings, PathResult, solve_system, total_degree_start
from .poly import CurveF, MultiPoly
from .squares import (SquareParam, canonicalize, corners, map_square, orbit,
                      random_rational_rotation, rewritten_generators, transform_curve)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 625
SUSPICIOUS_SINGULAR_FRACTION = 0.05


class BudgetExceeded(RuntimeError):
    pass


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SquareEntry:
    param: SquareParam
    real: bool
    cluster: int = 4

    def to_dict(self) -> dict:
        return {"param": [[float(complex(v).real), float(complex(v).imag)] for v in self.param],
                "real": self.real, "cluster": self.cluster}

    @classmethod
    def from_dict(cls, d: dict) -> SquareEntry:
        return cls(SquareParam(*(complex(re, im) for re, im in d["param"])),
                   bool(d["real"]), int(d.get("cluster", 4)))


@dataclass
class SquareReport:
    degree: int
    n_paths: int = 0
    n_finite: int = 0
    n_regular: int = 0
    n_singular: int = 0
    n_diverged: int = 0
    n_failed: int = 0
    n_nondegenerate: int = 0
    n_orbits: int = 0
    n_real_squares: int = 0
    squares: list[SquareEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    seed: int = 0
    rotated: bool = True
    rotation: tuple[str, str] = ("1", "0")
    shift: tuple[str, str] = ("0", "0")
    retried: int = 0
    max_residual: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["squares"] = [s.to_dict() for s in self.squares]
        d["rotation"] = list(self.rotation)
        d["shift"] = list(self.shift)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SquareReport:
        d = dict(d)
        d["squares"] = [SquareEntry.from_dict(s) for s in d.get("squares", [])]
        d["rotation"] = tuple(d.get("rotation", ("1", "0")))
        d["shift"] = tuple(d.get("shift", ("0", "0")))
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})

    @property
    def real_squares(self) -> list[SquareEntry]:
        return [s for s in self.squares if s.real]


def _distance(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.max(np.abs(x - y))) / max(1.0, float(np.max(np.abs(x))))


def _cluster(points: list[np.ndarray], tol: float) -> list[list[int]]:
    """Greedy clustering of points closer than ``tol`` (relative)."""
    clusters: list[list[int]] = []
    for i, p in enumerate(points):
        for cl in clusters:
            if _distance(points[cl[0]], p) < tol:
                cl.append(i)
                break
        else:
            clusters.append([i])
    return clusters


def _orbit_groups(sols: list[np.ndarray], tol: float) -> list[list[int]]:
    assigned = [False] * len(sols)
    groups = []
    for i, s in enumerate(sols):
        if assigned[i]:
            continue
        group = [i]
        assigned[i] = True
        for member in orbit(tuple(s))[1:]:
            mv = np.array(member, dtype=complex)
            for j in range(len(sols)):
                if not assigned[j] and _distance(mv, sols[j]) < tol:
                    assigned[j] = True
                    group.append(j)
                    break
        groups.append(group)
    return groups


def _nondegenerate(p: PathResult, settings: HomotopySettings) -> bool:
    x = p.endpoint
    size = abs(x[2]) + abs(x[3])
    # singular endpoints are only located to about the square root of the
    # working tolerance
    tol = settings.degenerate_tol if p.status == "regular" else math.sqrt(settings.degenerate_tol)
    return size >= tol


def _anomalies(results: list[PathResult], settings: HomotopySettings) -> set[int]:
    """Paths worth re-tracking with smaller steps."""
    bad = {i for i, p in enumerate(results) if p.status == "failed"}
    idx = [i for i, p in enumerate(results) if p.status == "regular" and _nondegenerate(p, settings)]
    pts = [results[i].endpoint for i in idx]
    for cl in _cluster(pts, settings.dedup_tol):
        if len(cl) > 1:
            bad.update(idx[c] for c in cl)
    incomplete = any(len(g) != 4 for g in _orbit_groups([pts[c[0]] for c in _cluster(pts, settings.dedup_tol)],
                                                        settings.dedup_tol))
    if bad or incomplete:
        bad.update(i for i, p in enumerate(results) if p.status != "regular")
    return bad


def corner_system_numeric(f: CurveF) -> list[MultiPoly]:
    """Rewritten generators of ``f`` after scaling ``f`` to unit max coefficient."""
    top = max(abs(Fraction(c)) for _, c in f.poly.items())
    scaled = CurveF(f.poly / top)
    return list(rewritten_generators(scaled).g)


def count_inscribed_squares(f: CurveF, settings: HomotopySettings | None = None, *,
                            rotate: bool = True, budget: int = DEFAULT_BUDGET) -> SquareReport:
    """Solve the corner system of ``f`` and group solutions into squares.

    With ``rotate`` the curve is first moved by a random rational rotation
    and translation (derived from ``settings.seed``); reported squares are
    always in the coordinates of the input curve.
    """
    settings = settings or HomotopySettings()
    m = f.degree
    report = SquareReport(degree=m, seed=settings.seed, rotated=rotate)
    rotation: tuple = (1, 0)
    shift: tuple = (0, 0)
    work = f
    if rotate:
        rng = random.Random(settings.seed)
        rotation = random_rational_rotation(rng)
        shift = (Fraction(rng.randint(-20, 20), 20), Fraction(rng.randint(-20, 20), 20))
        work = transform_curve(f, rotation=rotation, shift=shift)
    report.rotation = tuple(str(Fraction(v)) for v in rotation)
    report.shift = tuple(str(Fraction(v)) for v in shift)

    g = corner_system_numeric(work)
    zero = [i + 1 for i, gi in enumerate(g) if gi.is_zero()]
    if zero:
        names = ", ".join(f"g{i}" for i in zero)
        report.warnings.append(
            f"{names} vanishes identically: the corner system is underdetermined and every "
            "square lies in a positive-dimensional family (no isolated squares)")
        return report

    degrees = [gi.degree for gi in g]
    n_paths = math.prod(degrees)
    if n_paths > budget:
        raise BudgetExceeded(f"{n_paths} paths exceed the budget of {budget}; raise --budget")
    start = total_degree_start(degrees)
    results = solve_system(g, settings, start=start)
    redo = sorted(_anomalies(results, settings))
    if redo:
        log.info("re-tracking %d paths with smaller steps", len(redo))
        fine = replace(settings, initial_step=settings.initial_step / 8)
        again = solve_system(g, fine, start=start, subset=np.array(redo),
                             max_step=settings.max_step / 8)
        for i, p in zip(redo, again):
            results[i] = p
        report.retried = len(redo)

    report.n_paths = n_paths
    for p in results:
        if p.status == "regular":
            report.n_regular += 1
        elif p.status == "singular":
            report.n_singular += 1
        elif p.status == "diverged":
            report.n_diverged += 1
        else:
            report.n_failed += 1
    report.n_finite = report.n_regular + report.n_singular
    if report.n_failed == n_paths:
        raise SolverError("every path failed")
    if report.n_failed:
        report.warnings.append(f"{report.n_failed} paths failed to reach t = 1")

    sing_nondeg = [p for p in results if p.status == "singular" and _nondegenerate(p, settings)]
    if len(sing_nondeg) > SUSPICIOUS_SINGULAR_FRACTION * n_paths:
        report.warnings.append(
            f"suspected positive-dimensional family: {len(sing_nondeg)} of {n_paths} paths "
            "ended at singular non-degenerate points")

    kept = [p for p in results if p.status == "regular" and _nondegenerate(p, settings)]
    regular = [p.endpoint for p in kept]
    report.max_residual = max((p.residual for p in kept), default=0.0)
    clusters = _cluster(regular, settings.dedup_tol)
    unique = [regular[c[0]] for c in clusters]
    if any(len(c) > 1 for c in clusters):
        report.warnings.append("some regular endpoints were reached by more than one path")
    report.n_nondegenerate = len(unique)

    groups = _orbit_groups(unique, settings.dedup_tol)
    if any(len(gr) != 4 for gr in groups):
        report.warnings.append("some squares were found with fewer than four parametrizations")
    entries = []
    for gr in groups:
        rep = SquareParam(*(complex(v) for v in unique[gr[0]]))
        sq = map_square(rep, rotation, shift)
        sq = canonicalize(sq, tol=settings.dedup_tol)
        real = max(abs(complex(v).imag) for v in sq) < settings.reality_tol
        if real:
            sq = SquareParam(*(complex(complex(v).real, 0.0) for v in sq))
        entries.append(SquareEntry(sq, real, len(gr)))
    entries.sort(key=lambda e: (not e.real, [round(x, 9) for v in e.param for x in (v.real, v.imag)]))
    report.squares = entries
    report.n_orbits = len(entries)
    report.n_real_squares = sum(e.real for e in entries)
    return report


def polyline_corners(sq: Sequence) -> list[tuple]:
    """Corners in drawing order ``(a+c, b+d), (a-d, b+c), (a-c, b-d), (a+d, b-c)``."""
    c1, c2, c3, c4 = corners(sq)
    return [c1, c4, c3, c2]


def reality_and_render_data(report: SquareReport, include_complex: bool = False) -> list[tuple]:
    """``(corners, is_real)`` for each square, corners in polyline order.

    Only real squares are returned unless ``include_complex`` is set; real
    corners are returned as float pairs.
    """
    out = []
    for entry in report.squares:
        if not entry.real and not include_complex:
            continue
        pts = polyline_corners(entry.param)
        if entry.real:
            pts = [(complex(x).real, complex(y).real) for x, y in pts]
        out.append((pts, entry.real))
    return out
