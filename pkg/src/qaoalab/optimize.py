"""Classical outer loop over the 2p QAOA angles.

All optimizers take an ``AngleSchedule -> float`` objective and a ``sense``
(``"max"`` or ``"min"``); values in results are always in the objective's own
units. Each layer's ``(gamma, beta)`` pair searches the same rectangle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import AngleSchedule
from .errors import NumericError, ResourceLimitError

Objective = Callable[[AngleSchedule], float]

DEFAULT_GRID_BUDGET = 1_000_000


@dataclass(frozen=True)
class AngleBounds:
    gamma_range: tuple[float, float] = (0.0, 2 * math.pi)
    beta_range: tuple[float, float] = (0.0, math.pi)

    def __post_init__(self):
        for name in ("gamma_range", "beta_range"):
            lo, hi = (float(x) for x in getattr(self, name))
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"{name} must be a finite interval with lo <= hi, got ({lo}, {hi})")
            object.__setattr__(self, name, (lo, hi))

    def box(self, p):
        """Lower and upper corners of the flat ``(gammas, betas)`` search box."""
        lo = np.array([self.gamma_range[0]] * p + [self.beta_range[0]] * p)
        hi = np.array([self.gamma_range[1]] * p + [self.beta_range[1]] * p)
        return lo, hi

    def contains(self, angles: AngleSchedule) -> bool:
        lo, hi = self.box(angles.p)
        x = np.array(angles.flat())
        return bool(np.all(x >= lo) and np.all(x <= hi))


@dataclass
class OptimizationResult:
    best_angles: AngleSchedule
    best_value: float
    evaluations: int
    trace: list | None = field(default=None, repr=False)


def _sign(sense):
    if sense == "max":
        return -1.0
    if sense == "min":
        return 1.0
    raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")


def _evaluate(objective, x):
    angles = AngleSchedule.from_flat(x)
    value = float(objective(angles))
    if not math.isfinite(value):
        raise NumericError(f"objective returned {value!r} at {angles}", angles)
    return value


def grid_search(
    objective: Objective,
    p: int,
    bounds: AngleBounds | None = None,
    resolution: int = 51,
    sense: str = "max",
    max_evaluations: int = DEFAULT_GRID_BUDGET,
) -> OptimizationResult:
    """Exhaustive evaluation on a ``resolution``-per-axis grid with inclusive endpoints.

    Points are visited in lexicographic order of their grid index over
    ``(gamma_1..gamma_p, beta_1..beta_p)``; the first best point wins ties.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if p < 1:
        raise ValueError("p must be at least 1")
    total = resolution ** (2 * p)
    if total > max_evaluations:
        raise ResourceLimitError(
            f"grid of {resolution}^{2 * p} = {total} points exceeds the budget of {max_evaluations}"
        )
    bounds = bounds or AngleBounds()
    sign = _sign(sense)
    lo, hi = bounds.box(p)
    axes = [np.linspace(a, b, resolution) for a, b in zip(lo, hi)]
    best_key, best_x, best_val = math.inf, None, None
    for x in itertools.product(*axes):
        val = _evaluate(objective, x)
        if sign * val < best_key:
            best_key, best_x, best_val = sign * val, x, val
    return OptimizationResult(AngleSchedule.from_flat(best_x), best_val, total)


def nelder_mead(
    objective: Objective,
    p: int,
    start: AngleSchedule,
    bounds: AngleBounds | None = None,
    tol: float = 1e-12,
    max_iter: int = 500,
    sense: str = "max",
    step: float = 0.05,
) -> OptimizationResult:
    """Downhill simplex with reflection 1, expansion 2, contraction 1/2, shrink 1/2.

    The initial simplex offsets ``start`` by ``step`` times the bound width
    along each axis (pointing inward at an upper bound). Proposals are clamped
    onto the bounds. Stops once the spread of simplex values is below
    ``tol`` or after ``max_iter`` iterations. ``trace`` records the best
    vertex after every iteration.
    """
    bounds = bounds or AngleBounds()
    if start.p != p:
        raise ValueError(f"start has {start.p} layers, expected {p}")
    if not bounds.contains(start):
        raise ValueError(f"start {start} lies outside {bounds}")
    sign = _sign(sense)
    lo, hi = bounds.box(p)
    dim = 2 * p
    evaluations = 0

    def f(x):
        nonlocal evaluations
        evaluations += 1
        return sign * _evaluate(objective, x)

    def clamp(x):
        return np.minimum(np.maximum(x, lo), hi)

    x0 = np.array(start.flat(), dtype=float)
    simplex = [x0]
    for k in range(dim):
        x = x0.copy()
        width = hi[k] - lo[k]
        delta = step * width if width > 0 else step
        x[k] = x[k] + delta if x[k] + delta <= hi[k] else x[k] - delta
        simplex.append(clamp(x))
    values = [f(x) for x in simplex]
    trace = []

    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[k] for k in order]
        values = [values[k] for k in order]
        if values[-1] - values[0] < tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = clamp(centroid + (centroid - worst))
        fr = f(xr)
        if fr < values[0]:
            xe = clamp(centroid + 2.0 * (centroid - worst))
            fe = f(xe)
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = clamp(centroid + 0.5 * (xr - centroid))
            else:
                xc = clamp(centroid + 0.5 * (worst - centroid))
            fc = f(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                best = simplex[0]
                simplex = [best] + [clamp(best + 0.5 * (x - best)) for x in simplex[1:]]
                values = [values[0]] + [f(x) for x in simplex[1:]]
        k = int(np.argmin(values))
        trace.append((AngleSchedule.from_flat(simplex[k]), sign * values[k]))

    k = int(np.argmin(values))
    return OptimizationResult(
        AngleSchedule.from_flat(simplex[k]), sign * values[k], evaluations, trace
    )


def coarse_resolution(p: int, per_axis: int = 11, budget: int = 20_000) -> int:
    """Largest per-axis count up to ``per_axis`` whose full grid fits ``budget``."""
    r = per_axis
    while r > 2 and r ** (2 * p) > budget:
        r -= 1
    return r


def multi_start(
    objective: Objective,
    p: int,
    bounds: AngleBounds | None = None,
    n_starts: int = 20,
    seed: int = 0,
    sense: str = "max",
    tol: float = 1e-12,
    max_iter: int = 500,
) -> OptimizationResult:
    """Nelder-Mead from ``n_starts`` seeded random points and from the coarse-grid winner.

    The coarse grid has 11 points per axis while that fits 20 000 evaluations,
    fewer at larger p. Ties between runs keep the earliest run, the grid
    refinement first.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    bounds = bounds or AngleBounds()
    sign = _sign(sense)
    lo, hi = bounds.box(p)
    rng = np.random.Generator(np.random.PCG64(seed))
    starts = [lo + (hi - lo) * rng.random(2 * p) for _ in range(n_starts)]

    coarse = grid_search(objective, p, bounds, coarse_resolution(p), sense)
    evaluations = coarse.evaluations
    best = coarse
    runs = [coarse.best_angles] + [AngleSchedule.from_flat(x) for x in starts]
    for start in runs:
        res = nelder_mead(objective, p, start, bounds, tol, max_iter, sense)
        evaluations += res.evaluations
        if sign * res.best_value < sign * best.best_value:
            best = res
    return OptimizationResult(best.best_angles, best.best_value, evaluations, best.trace)
