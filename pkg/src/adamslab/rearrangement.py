"""Distribution functions and rearrangements of nonnegative step data.

A function is modelled by cells ``(value, measure)``; its decreasing
rearrangement is then a step function on ``[0, total measure)`` and every
identity below is exact up to summation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .radial_core import RadialFunction, RadialGrid, make_log_grid, measures

__all__ = [
    "DecreasingProfile",
    "MeasuredSamples",
    "decreasing_rearrangement",
    "distribution",
    "hardy_littlewood_gap",
    "maximal_profile",
    "property_suite",
    "random_samples",
    "schwarz",
]


@dataclass(frozen=True)
class MeasuredSamples:
    values: np.ndarray
    measures: np.ndarray

    def __init__(self, values, measures):
        v = np.array(values, dtype=float).ravel()
        m = np.array(measures, dtype=float).ravel()
        if v.shape != m.shape or v.size == 0:
            raise ValueError("values and measures must be nonempty and of equal length")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        if np.any(v < 0):
            raise ValueError("values must be nonnegative; pass |f|")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            raise ValueError("cell measures must be positive and finite")
        v.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "measures", m)

    @property
    def total(self) -> float:
        return float(np.sum(self.measures))

    def lp_norm(self, p: float) -> float:
        return float(np.sum(self.values**p * self.measures)) ** (1.0 / p)

    def map(self, fn) -> "MeasuredSamples":
        return MeasuredSamples(fn(self.values), self.measures)


@dataclass(frozen=True)
class DecreasingProfile:
    """Right-continuous step function, ``values[j]`` on ``[breaks[j], breaks[j+1])``."""

    breaks: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.breaks.size != self.values.size + 1 or self.breaks[0] != 0:
            raise ValueError("need breakpoints 0 = s_0 < ... < s_N for N values")
        if np.any(np.diff(self.breaks) <= 0):
            raise ValueError("breakpoints must increase strictly")
        if np.any(np.diff(self.values) > 0):
            raise ValueError("profile values must be nonincreasing")

    @property
    def total(self) -> float:
        return float(self.breaks[-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breaks)

    def __call__(self, s):
        """Evaluate the profile; zero at and beyond the total measure."""
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breaks, s, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.size - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def distribution(self, t: float) -> float:
        return float(np.sum(self.widths[self.values > t]))

    def lp_norm(self, p: float) -> float:
        return float(np.sum(self.values**p * self.widths)) ** (1.0 / p)


def distribution(f: MeasuredSamples, t: float) -> float:
    """Measure of the set where the value exceeds ``t``."""
    if t < 0:
        raise ValueError("level must be nonnegative")
    return float(np.sum(f.measures[f.values > t]))


def decreasing_rearrangement(f: MeasuredSamples) -> DecreasingProfile:
    order = np.argsort(-f.values, kind="stable")
    v = f.values[order]
    m = f.measures[order]
    # merge equal values so the profile does not depend on tie order
    starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
    merged = np.add.reduceat(m, starts)
    breaks = np.r_[0.0, np.cumsum(merged)]
    return DecreasingProfile(breaks, v[starts].copy())


def maximal_profile(g: DecreasingProfile, s: float) -> float:
    """Running average ``(1/s) * integral_0^s g``."""
    if not s > 0:
        raise ValueError("s must be positive")
    if s >= g.total:
        return float(np.dot(g.values, g.widths)) / s
    j = int(np.searchsorted(g.breaks, s, side="right")) - 1
    head = float(np.dot(g.values[:j], g.widths[:j]))
    return (head + g.values[j] * (s - g.breaks[j])) / s


def schwarz(f: MeasuredSamples, n: int, grid: Optional[RadialGrid] = None) -> RadialFunction:
    """Radially decreasing profile ``r -> f_sharp(sigma_n r**n)`` on ``grid``.

    The default grid reaches twice the radius of the ball carrying the support.
    """
    profile = decreasing_rearrangement(f)
    _, sigma = measures(n)
    if grid is None:
        radius = (profile.total / sigma) ** (1.0 / n)
        grid = make_log_grid(n, 1e-4 * radius, 2.0 * radius, 1024)
    elif grid.n != n:
        raise ValueError("grid dimension does not match n")
    return RadialFunction(grid, profile(sigma * grid.nodes**n))


def _overlap_integral(a: DecreasingProfile, b: DecreasingProfile) -> float:
    cuts = np.union1d(a.breaks, b.breaks)
    mids = 0.5 * (cuts[1:] + cuts[:-1])
    return float(np.sum(a(mids) * b(mids) * np.diff(cuts)))


def hardy_littlewood_gap(f: MeasuredSamples, g: MeasuredSamples) -> float:
    """``integral f* g* - integral f g``; nonnegative for every pair."""
    if f.measures.shape != g.measures.shape or not np.array_equal(f.measures, g.measures):
        raise ValueError("both functions must live on the same cells")
    paired = float(np.sum(f.values * g.values * f.measures))
    sym = _overlap_integral(decreasing_rearrangement(f), decreasing_rearrangement(g))
    return sym - paired


def random_samples(rng: np.random.Generator, cells: Optional[int] = None) -> MeasuredSamples:
    """Random instance with deliberate ties: a third of the values are rounded."""
    size = int(rng.integers(1, 60)) if cells is None else cells
    values = rng.uniform(0.0, 3.0, size)
    tie = rng.random(size) < 1 / 3
    values[tie] = np.round(values[tie], 1)
    return MeasuredSamples(values, rng.uniform(0.01, 2.0, size))


def _radial_bound_gap(f: MeasuredSamples, n: int, exponents) -> float:
    star = schwarz(f, n)
    omega, _ = measures(n)
    r = star.r
    worst = -np.inf
    for wp in exponents:
        bound = r ** (-n / wp) * (n / omega) ** (1.0 / wp) * f.lp_norm(wp)
        excess = star.values - bound
        rel = np.divide(excess, bound, out=np.where(excess > 0, np.inf, 0.0), where=bound > 0)
        worst = max(worst, float(np.max(rel)))
    return worst


def property_suite(trials: int = 1000, seed: int = 7, n: int = 4, p: float = 1.5) -> list[tuple[str, int, int, float]]:
    """Rows ``(property, trials, violations, worst)`` for the rearrangement identities.

    ``worst`` is the largest relative defect seen (a violation when positive
    beyond ``1e-12``; for the maximal function it is ``max(f# - f##)``).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    tol = 1e-12
    stats = {name: [0, -np.inf] for name in ("norm_preservation", "hardy_littlewood", "maximal_dominates",
                                             "radial_decay", "equimeasurable")}

    def record(name, defect):
        entry = stats[name]
        entry[1] = max(entry[1], defect)
        if defect > tol:
            entry[0] += 1

    for _ in range(trials):
        f = random_samples(rng)
        g = MeasuredSamples(rng.uniform(0.0, 3.0, f.values.size), f.measures)
        prof = decreasing_rearrangement(f)
        for q in (1.0, 1.5, 2.0, 7.0):
            a, b = f.lp_norm(q), prof.lp_norm(q)
            record("norm_preservation", abs(a - b) / a if a else abs(b))
        paired = float(np.sum(f.values * g.values * f.measures))
        record("hardy_littlewood", -hardy_littlewood_gap(f, g) / max(paired, 1.0))
        s = rng.uniform(1e-9, 1.2 * prof.total, 16)
        record("maximal_dominates", max(prof(x) - maximal_profile(prof, x) for x in s))
        levels = rng.uniform(0.0, 3.0, 8)
        record("equimeasurable", max(abs(distribution(f, t) - prof.distribution(t)) / f.total for t in levels))
        record("radial_decay", _radial_bound_gap(f, n, (1.0, p, n / 2.0)))
    return [(name, trials, count, float(worst)) for name, (count, worst) in stats.items()]
