"""Total-degree homotopy continuation for square polynomial systems.

Paths are tracked in projective space: every equation is homogenized with an
extra coordinate ``z0`` and a random affine chart ``ell . z = 1`` is appended,
so paths heading to infinity stay bounded.  All paths advance together as
numpy batches, each with its own ``t`` and step size.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .poly import MultiPoly

log = logging.getLogger(__name__)

MAX_START_POINTS = 10 ** 6


@dataclass(frozen=True)
class HomotopySettings:
    gamma: complex | None = None
    initial_step: float = 0.02
    min_step: float = 1e-14
    max_step: float = 0.1
    corrector_tol: float = 1e-10
    max_corrector_iters: int = 3
    max_steps: int = 50_000
    endpoint_tol: float = 1e-8
    dedup_tol: float = 1e-6
    degenerate_tol: float = 1e-8
    reality_tol: float = 1e-6
    divergence_norm: float = 1e10
    singular_cond: float = 1e10
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.min_step <= self.initial_step <= 1:
            raise ValueError("need 0 < min_step <= initial_step <= 1")
        for name in ("corrector_tol", "endpoint_tol", "dedup_tol", "degenerate_tol", "reality_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def resolved_gamma(self) -> complex:
        if self.gamma is not None:
            return complex(self.gamma)
        theta = np.random.default_rng([self.seed, 7]).uniform(0, 2 * math.pi)
        return complex(math.cos(theta), math.sin(theta))


@dataclass
class PathResult:
    endpoint: np.ndarray
    status: str  # regular | singular | diverged | failed
    residual: float
    contraction: float
    steps: int
    t: float = 1.0
    cond: float = float("nan")

    @property
    def finite(self) -> bool:
        return self.status in ("regular", "singular")


class CompiledSystem:
    """Batch evaluator for a list of polynomials and their Jacobian."""

    def __init__(self, equations: Sequence[MultiPoly]):
        if not equations:
            raise ValueError("empty system")
        nvars = equations[0].nvars
        if any(e.nvars != nvars for e in equations):
            raise ValueError("equations live in different rings")
        self.nvars = nvars
        self.neq = len(equations)
        index: dict[tuple, int] = {}

        def slot(e):
            if e not in index:
                index[e] = len(index)
            return index[e]

        entries = []  # (monomial slot, which, eq, coeff)  which = -1 for value, j for d/dx_j
        for i, eq in enumerate(equations):
            for e, c in eq.items():
                entries.append((slot(e), -1, i, complex(c)))
                for j in range(nvars):
                    if e[j]:
                        d = list(e)
                        d[j] -= 1
                        entries.append((slot(tuple(d)), j, i, complex(c) * e[j]))
        T = len(index)
        self.exps = np.zeros((T, nvars), dtype=np.int64)
        for e, s in index.items():
            self.exps[s] = e
        self.maxdeg = int(self.exps.max()) if T else 0
        self.value_coeffs = np.zeros((T, self.neq), dtype=complex)
        jac = np.zeros((T, nvars, self.neq), dtype=complex)
        for s, which, i, c in entries:
            if which < 0:
                self.value_coeffs[s, i] += c
            else:
                jac[s, which, i] += c
        self.jac_coeffs = jac.reshape(T, nvars * self.neq)

    def monomials(self, X: np.ndarray) -> np.ndarray:
        P = X.shape[0]
        pw = np.empty((P, self.nvars, self.maxdeg + 1), dtype=complex)
        pw[:, :, 0] = 1.0
        for k in range(1, self.maxdeg + 1):
            pw[:, :, k] = pw[:, :, k - 1] * X
        mon = np.ones((P, self.exps.shape[0]), dtype=complex)
        for j in range(self.nvars):
            mon *= pw[:, j, self.exps[:, j]]
        return mon

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        return self.monomials(X) @ self.value_coeffs

    def evaluate_with_jacobian(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mon = self.monomials(X)
        F = mon @ self.value_coeffs
        J = (mon @ self.jac_coeffs).reshape(X.shape[0], self.nvars, self.neq).transpose(0, 2, 1)
        return F, J


def homogenize(p: MultiPoly, degree: int) -> MultiPoly:
    """Homogenize with a new leading variable ``z0``."""
    return MultiPoly({(degree - sum(e),) + e: c for e, c in p.items()}, p.nvars + 1)


def total_degree_start(degrees: Sequence[int]) -> tuple[list[MultiPoly], np.ndarray]:
    """Start system ``x_i^{d_i} - 1`` and all of its roots."""
    if any(d < 1 for d in degrees):
        raise ValueError("all degrees must be at least 1")
    total = math.prod(degrees)
    if total > MAX_START_POINTS:
        raise ValueError(f"{total} start points exceed the limit of {MAX_START_POINTS}")
    n = len(degrees)
    system = []
    for i, d in enumerate(degrees):
        e = [0] * n
        e[i] = d
        system.append(MultiPoly({tuple(e): 1, (0,) * n: -1}, n))
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    points = np.array(list(itertools.product(*roots)), dtype=complex).reshape(total, n)
    return system, points


def _batched_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(b.shape, np.nan, dtype=complex)
        for i in range(A.shape[0]):
            try:
                out[i] = np.linalg.solve(A[i], b[i])
            except np.linalg.LinAlgError:
                pass
        return out


class ProjectiveHomotopy:
    """``H(z, t) = gamma (1 - t) G(z) + t F(z)`` on a random affine chart."""

    def __init__(self, target: Sequence[MultiPoly], start: Sequence[MultiPoly],
                 gamma: complex, chart: np.ndarray):
        n = target[0].nvars
        if len(target) != n or len(start) != n:
            raise ValueError("homotopy needs square systems of equal size")
        self.n = n
        self.degrees = [max(t.degree, s.degree) for t, s in zip(target, start)]
        self.F = CompiledSystem([homogenize(p, d) for p, d in zip(target, self.degrees)])
        self.G = CompiledSystem([homogenize(p, d) for p, d in zip(start, self.degrees)])
        self.gamma = gamma
        self.chart = np.asarray(chart, dtype=complex)

    def lift(self, X: np.ndarray) -> np.ndarray:
        Z = np.concatenate([np.ones((X.shape[0], 1), dtype=complex), X], axis=1)
        return Z / (Z @ self.chart)[:, None]

    def system(self, Z: np.ndarray, t: np.ndarray):
        """Values ``H``, Jacobian ``H_z`` and ``H_t`` for a batch."""
        Fv, FJ = self.F.evaluate_with_jacobian(Z)
        Gv, GJ = self.G.evaluate_with_jacobian(Z)
        s = self.gamma * (1.0 - t)[:, None]
        tt = t[:, None]
        P = Z.shape[0]
        H = np.empty((P, self.n + 1), dtype=complex)
        H[:, : self.n] = s * Gv + tt * Fv
        H[:, self.n] = Z @ self.chart - 1.0
        Hz = np.empty((P, self.n + 1, self.n + 1), dtype=complex)
        Hz[:, : self.n, :] = s[:, :, None] * GJ + tt[:, :, None] * FJ
        Hz[:, self.n, :] = self.chart
        Ht = np.zeros((P, self.n + 1), dtype=complex)
        Ht[:, : self.n] = Fv - self.gamma * Gv
        return H, Hz, Ht

    def velocity(self, Z, t):
        _, Hz, Ht = self.system(Z, t)
        return _batched_solve(Hz, -Ht)

    def newton(self, Z, t, tol, maxit):
        """Corrector at fixed ``t``; returns (Z, converged, last correction norm)."""
        Z = Z.copy()
        ok = np.zeros(Z.shape[0], dtype=bool)
        alive = np.ones(Z.shape[0], dtype=bool)
        prev = np.full(Z.shape[0], np.inf)
        last = np.full(Z.shape[0], np.inf)
        for _ in range(maxit):
            idx = np.flatnonzero(alive & ~ok)
            if idx.size == 0:
                break
            H, Hz, _ = self.system(Z[idx], t[idx])
            dz = _batched_solve(Hz, -H)
            norm = np.max(np.abs(dz), axis=1)
            scale = 1.0 + np.max(np.abs(Z[idx]), axis=1)
            bad = ~np.isfinite(norm) | (norm > 0.5 * prev[idx])
            Z[idx] = np.where(bad[:, None], Z[idx], Z[idx] + dz)
            alive[idx[bad]] = False
            prev[idx] = norm
            last[idx] = norm
            ok[idx] = ~bad & (norm < tol * scale)
        return Z, ok, last


def _rk4(hom: ProjectiveHomotopy, Z, t, h):
    hc = h[:, None]
    k1 = hom.velocity(Z, t)
    k2 = hom.velocity(Z + 0.5 * hc * k1, t + 0.5 * h)
    k3 = hom.velocity(Z + 0.5 * hc * k2, t + 0.5 * h)
    k4 = hom.velocity(Z + hc * k3, t + h)
    return Z + hc / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass
class RawTrack:
    """Projective endpoints and bookkeeping straight out of the tracker."""

    Z: np.ndarray
    t: np.ndarray
    steps: np.ndarray
    state: np.ndarray  # 0 done at t=1, 1 stalled near t=1, 2 diverged, 3 failed


END_ZONE = 1e-6


def track_batch(hom: ProjectiveHomotopy, X0: np.ndarray, settings: HomotopySettings,
                max_step: float | None = None) -> RawTrack:
    """Track all start points ``X0`` (affine) from ``t = 0`` to ``t = 1``."""
    P = X0.shape[0]
    Z = hom.lift(X0)
    t = np.zeros(P)
    h = np.full(P, settings.initial_step)
    hmax = settings.max_step if max_step is None else max_step
    succ = np.zeros(P, dtype=np.int64)
    steps = np.zeros(P, dtype=np.int64)
    state = np.full(P, -1, dtype=np.int64)
    while True:
        idx = np.flatnonzero(state < 0)
        if idx.size == 0:
            break
        hh = np.minimum(h[idx], 1.0 - t[idx])
        t1 = t[idx] + hh
        t1[hh >= 1.0 - t[idx]] = 1.0
        with np.errstate(all="ignore"):
            Zp = _rk4(hom, Z[idx], t[idx], hh)
            Zc, ok, _ = hom.newton(Zp, t1, settings.corrector_tol, settings.max_corrector_iters)
        steps[idx] += 1
        acc = idx[ok]
        rej = idx[~ok]
        Z[acc] = Zc[ok]
        t[acc] = t1[ok]
        succ[acc] += 1
        grow = acc[succ[acc] >= 3]
        h[grow] = np.minimum(2.0 * h[grow], hmax)
        succ[grow] = 0
        h[rej] *= 0.5
        succ[rej] = 0

        done = acc[t[acc] >= 1.0]
        state[done] = 0
        affine = np.max(np.abs(Z[idx, 1:]), axis=1) / np.maximum(np.abs(Z[idx, 0]), 1e-300)
        state[idx[(affine > settings.divergence_norm) & (state[idx] < 0)]] = 2
        small = rej[(h[rej] < settings.min_step) & (state[rej] < 0)]
        near_end = (1.0 - t[small]) < END_ZONE
        state[small[near_end]] = 1
        state[small[~near_end]] = 3
        over = idx[(steps[idx] >= settings.max_steps) & (state[idx] < 0)]
        state[over] = 3
    return RawTrack(Z=Z, t=t, steps=steps, state=state)


def _newton_step(F: CompiledSystem, x: np.ndarray) -> np.ndarray | None:
    Fv, J = F.evaluate_with_jacobian(x[None, :])
    try:
        dx = np.linalg.solve(J[0], -Fv[0])
    except np.linalg.LinAlgError:
        return None
    return dx if np.all(np.isfinite(dx)) else None


# contraction above this from a 1e-7 perturbation means no quadratic convergence
REGULAR_RATE = 1e-2

# fixed probe direction so classification is deterministic
_PROBE = np.random.default_rng(12345).normal(size=(16, 2)) @ np.array([1.0, 1j])


def contraction_rate(F: CompiledSystem, x: np.ndarray, rel: float = 1e-7) -> float:
    """Ratio of the second to the first Newton correction from a perturbed start.

    Near a regular root Newton converges quadratically and the ratio is of
    the order of the perturbation; near a singular root convergence is at
    best linear and the ratio stays around 1/2 or above.
    """
    scale = 1.0 + float(np.max(np.abs(x)))
    u = _PROBE[: x.size]
    y = x + rel * scale * u / np.max(np.abs(u))
    d1 = _newton_step(F, y)
    if d1 is None:
        return float("inf")
    d2 = _newton_step(F, y + d1)
    if d2 is None:
        return float("inf")
    n1 = float(np.max(np.abs(d1)))
    return float(np.max(np.abs(d2))) / n1 if n1 > 0 else float("inf")


def newton_polish(F: CompiledSystem, x: np.ndarray, iters: int = 6):
    """Newton at ``t = 1`` on the affine target.

    Returns the polished point, its contraction rate (see
    :func:`contraction_rate`) and the Jacobian condition number.
    """
    x = x.astype(complex).copy()
    for _ in range(iters):
        dx = _newton_step(F, x)
        if dx is None:
            break
        x = x + dx
        if np.max(np.abs(dx)) <= 1e-15 * (1.0 + float(np.max(np.abs(x)))):
            break
    rate = contraction_rate(F, x)
    _, J = F.evaluate_with_jacobian(x[None, :])
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(J[0]))
    return x, rate, cond


def relative_residual(equations: Sequence[MultiPoly], x: np.ndarray) -> float:
    """``max_i |p_i(x)| / (||p_i||_1 * max(1, ||x||_inf)^deg p_i)``."""
    scale = max(1.0, float(np.max(np.abs(x))))
    worst = 0.0
    for p in equations:
        if p.is_zero():
            continue
        val = abs(complex(p.evaluate([complex(v) for v in x])))
        worst = max(worst, val / (p.coefficient_norm() * scale ** p.degree))
    return worst


def solve_system(target: Sequence[MultiPoly], settings: HomotopySettings,
                 start: tuple[list[MultiPoly], np.ndarray] | None = None,
                 subset: np.ndarray | None = None,
                 max_step: float | None = None) -> list[PathResult]:
    """Track every total-degree path of ``target`` and classify endpoints."""
    target = [p.to_numeric() for p in target]
    n = len(target)
    degrees = [p.degree for p in target]
    if start is None:
        start = total_degree_start(degrees)
    start_system, X0 = start
    if subset is not None:
        X0 = X0[subset]
    rng = np.random.default_rng([settings.seed, 11])
    chart = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    hom = ProjectiveHomotopy(target, start_system, settings.resolved_gamma(), chart)
    raw = track_batch(hom, X0, settings, max_step=max_step)
    affine = CompiledSystem(target)
    results = []
    for i in range(X0.shape[0]):
        results.append(_classify(raw, i, affine, target, settings))
    return results


def _classify(raw: RawTrack, i: int, affine: CompiledSystem, target, settings) -> PathResult:
    z = raw.Z[i]
    state = int(raw.state[i])
    steps = int(raw.steps[i])
    t = float(raw.t[i])
    with np.errstate(all="ignore"):
        x = z[1:] / z[0]
    norm = float(np.max(np.abs(x))) if np.all(np.isfinite(x)) else float("inf")
    if state == 2 or norm > settings.divergence_norm:
        return PathResult(x, "diverged", float("nan"), float("nan"), steps, t)
    if state == 3:
        return PathResult(x, "failed", float("nan"), float("nan"), steps, t)
    with np.errstate(all="ignore"):
        xp, rate, cond = newton_polish(affine, x)
    res0 = relative_residual(target, x)
    res1 = relative_residual(target, xp) if np.all(np.isfinite(xp)) else float("inf")
    if res1 <= res0 and np.all(np.isfinite(xp)):
        x, res = xp, res1
    else:
        res = res0
    regular = (state == 0 and res < settings.endpoint_tol and rate < REGULAR_RATE
               and cond < settings.singular_cond)
    return PathResult(x, "regular" if regular else "singular", res, rate, steps, t, cond)


def track_path(target: Sequence[MultiPoly], start_system: Sequence[MultiPoly],
               start_point: Sequence[complex], settings: HomotopySettings) -> PathResult:
    """Track a single path; see :func:`solve_system` for the batch version."""
    X0 = np.asarray([start_point], dtype=complex)
    return solve_system(target, settings, start=(list(start_system), X0))[0]
