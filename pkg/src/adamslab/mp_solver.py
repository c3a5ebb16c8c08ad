"""Energy, weak gradient and a mountain-pass solver for the radial model problem.

The unknown is a radial profile sampled on a log grid with ``u = 0`` at the
outer node.  Laplacians are the grid's five-point operator ``L``, so the
discrete energy

    J(u) = (1/p) sum w |Lu|**p + (2/n) sum w |Lu|**(n/2) - sum w_gamma G(u)

(``w`` absorbing the sphere area) is an explicit function of the nodal values
and its gradient is exact.  Dual quantities are measured with the grid
biharmonic form ``K = L^T W L``, which is factored once per grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, sparse
from scipy.sparse import linalg as splinalg

from .radial_core import ConstantSet, RadialFunction, RadialGrid, derived_constants, make_log_grid
from .young import MAX_EXPONENT, PhiOverflowError

__all__ = [
    "DiagnosticsSummary",
    "EndpointSearchError",
    "ProblemSpec",
    "SolveReport",
    "cutoff_bounds",
    "default_grid",
    "cutoff_psi",
    "diagnostics",
    "energy",
    "energy_parts",
    "find_endpoint",
    "find_lambda0",
    "mountain_pass_solve",
    "nonlinearity",
    "nonlinearity_slope",
    "residual_norm",
    "sphere_geometry",
    "weak_gradient",
]


class EndpointSearchError(RuntimeError):
    """No scaling of the cut-off within the search range has negative energy."""


def default_grid(n: int, nodes: int = 2048, r_max: float = 8.0) -> RadialGrid:
    return make_log_grid(n, 1e-4, r_max, nodes)


@dataclass(frozen=True)
class ProblemSpec:
    """Parameters of the equation, the model nonlinearity and the solver.

    ``mu`` defaults to ``vartheta``, the superlinearity constant the model
    nonlinearity satisfies.
    """

    n: int = 4
    p: float = 1.5
    gamma: float = 1.0
    lam: float = 1e6
    vartheta: float = 7.0
    alpha0: float = 1.0
    mu: Optional[float] = None
    grid: Optional[RadialGrid] = None
    tol: float = 1e-6
    step_tol: float = 1e-14
    max_sweeps: int = 3000
    max_newton: int = 80
    s_max: float = 2.0

    def __post_init__(self):
        n = self.n
        if int(n) != n or n < 4:
            raise ValueError(f"n must be an integer >= 4, got {n}")
        object.__setattr__(self, "n", int(n))
        if not 1 < self.p < n / 2:
            raise ValueError(f"need 1 < p < n/2, got {self.p}")
        if not 0 < self.gamma < n:
            raise ValueError(f"need 0 < gamma < n, got {self.gamma}")
        p_star = n * self.p / (n - 2.0 * self.p)
        if not self.vartheta > max(p_star, n / 2.0):
            raise ValueError(f"need vartheta > max(p*, n/2) = {max(p_star, n / 2.0):g}, got {self.vartheta}")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not self.alpha0 > 0:
            raise ValueError("alpha0 must be positive")
        if self.mu is None:
            object.__setattr__(self, "mu", float(self.vartheta))
        if not self.mu > n / 2.0:
            raise ValueError(f"need mu > n/2, got {self.mu}")
        if self.grid is None:
            object.__setattr__(self, "grid", default_grid(n))
        elif self.grid.n != n:
            raise ValueError("grid dimension does not match n")
        if not (self.tol > 0 and self.step_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.s_max >= 1:
            raise ValueError("s_max must be at least 1")

    @property
    def q_exp(self) -> float:
        return self.n / (self.n - 2.0)

    @property
    def constants(self) -> ConstantSet:
        return derived_constants(self.n, self.p, self.gamma, self.mu, self.alpha0)

    def with_lambda(self, lam: float) -> "ProblemSpec":
        return _replace(self, lam=lam)

    def with_grid(self, grid: RadialGrid) -> "ProblemSpec":
        return _replace(self, grid=grid)

    @cached_property
    def _ops(self) -> "_Operators":
        return _Operators(self.grid, self.gamma)


def _replace(spec: ProblemSpec, **changes) -> ProblemSpec:
    fields = {k: getattr(spec, k) for k in spec.__dataclass_fields__}
    fields.update(changes)
    return ProblemSpec(**fields)


class _Operators:
    """Grid matrices shared by every evaluation on one grid."""

    def __init__(self, grid: RadialGrid, gamma: float):
        self.grid = grid
        self.lap = grid.laplacian_matrix.tocsr()
        self.free_lap = self.lap[:, :-1].tocsc()
        self.w = grid.omega * np.asarray(grid.weights_for(0.0))
        self.w_gamma = grid.omega * np.asarray(grid.weights_for(gamma))
        gram = (self.free_lap.T @ sparse.diags(self.w) @ self.free_lap).tocsc()
        self.gram_lu = splinalg.splu(gram)

    def dual_norm(self, d_free: np.ndarray) -> float:
        return math.sqrt(max(float(d_free @ self.gram_lu.solve(d_free)), 0.0))


def _values(u, spec: ProblemSpec) -> np.ndarray:
    if isinstance(u, RadialFunction):
        if u.grid is not spec.grid:
            raise ValueError("profile does not live on the problem grid")
        u = u.values
    u = np.asarray(u, dtype=float)
    if u.shape != spec.grid.nodes.shape:
        raise ValueError("need one value per grid node")
    return u


# ---------------------------------------------------------------------------
# nonlinearity


def _exponent(s, spec: ProblemSpec) -> np.ndarray:
    x = spec.alpha0 * np.abs(s) ** spec.q_exp
    top = float(np.max(x)) if np.size(x) else 0.0
    if top > MAX_EXPONENT:
        raise PhiOverflowError(top)
    return x


def nonlinearity(s, spec: ProblemSpec):
    """``G = lam |s|**theta exp(alpha0 |s|**q)`` and ``g = dG/ds``, with ``q = n/(n-2)``.

    Raises ``PhiOverflowError`` when the exponential leaves the double range.
    """
    s = np.asarray(s, dtype=float)
    x = _exponent(s, spec)
    h = np.abs(s)
    e = np.exp(x)
    big_g = spec.lam * h**spec.vartheta * e
    small_g = spec.lam * h ** (spec.vartheta - 2.0) * s * e * (spec.vartheta + spec.q_exp * x)
    if s.ndim == 0:
        return float(big_g), float(small_g)
    return big_g, small_g


def nonlinearity_slope(s, spec: ProblemSpec):
    """``dg/ds``, even in ``s``."""
    s = np.asarray(s, dtype=float)
    x = _exponent(s, spec)
    h = np.abs(s)
    q, th = spec.q_exp, spec.vartheta
    poly = th * (th - 1.0) + q * (2.0 * th + q - 1.0) * x + (q * x) ** 2
    out = spec.lam * np.exp(x) * h ** (th - 2.0) * poly
    return float(out) if s.ndim == 0 else out


# ---------------------------------------------------------------------------
# energy and gradient


def energy_parts(u, spec: ProblemSpec) -> tuple[float, float, float]:
    """``((1/p)||Lu||_p**p, (2/n)||Lu||_{n/2}**(n/2), integral G(u) |x|**-gamma)``."""
    ops = spec._ops
    v = _values(u, spec)
    lap = ops.lap @ v
    a = np.abs(lap)
    first = float(ops.w @ a**spec.p) / spec.p
    second = float(ops.w @ a ** (spec.n / 2.0)) * 2.0 / spec.n
    big_g, _ = nonlinearity(v, spec)
    return first, second, float(ops.w_gamma @ big_g)


def energy(u, spec: ProblemSpec) -> float:
    first, second, third = energy_parts(u, spec)
    return first + second - third


def _operator_part(v: np.ndarray, spec: ProblemSpec) -> np.ndarray:
    ops = spec._ops
    lap = ops.lap @ v
    a = np.abs(lap)
    flux = np.sign(lap) * (a ** (spec.p - 1.0) + a ** (spec.n / 2.0 - 1.0))
    return ops.lap.T @ (ops.w * flux)


def weak_gradient(u, spec: ProblemSpec) -> np.ndarray:
    """Coefficients ``d`` with ``<J'(u), v> = d . v`` for every nodal vector ``v``.

    Exact derivative of the discrete energy; ``|Lu|**(p-2) Lu`` is evaluated
    as ``sign(Lu) |Lu|**(p-1)``, which is finite where ``Lu`` vanishes.
    """
    v = _values(u, spec)
    _, g = nonlinearity(v, spec)
    return _operator_part(v, spec) - spec._ops.w_gamma * g


def residual_norm(u, spec: ProblemSpec, gradient: Optional[np.ndarray] = None) -> float:
    """Dual norm of ``J'(u)`` relative to that of its differential-operator part.

    Both are measured in the norm dual to ``sqrt(sum w |Lv|**2)`` on
    profiles vanishing at the outer node.
    """
    v = _values(u, spec)
    d = weak_gradient(v, spec) if gradient is None else gradient
    ops = spec._ops
    top = ops.dual_norm(d[:-1])
    scale = ops.dual_norm(_operator_part(v, spec)[:-1])
    return top / scale if scale > 0 else top


def _hessian(v: np.ndarray, spec: ProblemSpec) -> sparse.csc_matrix:
    ops = spec._ops
    lap = ops.lap @ v
    a2 = lap * lap
    dnorm_p = float(ops.w @ np.abs(lap) ** spec.p) ** (1.0 / spec.p)
    eps = 1e-10 * dnorm_p
    curv = (spec.p - 1.0) * (a2 + eps * eps) ** ((spec.p - 2.0) / 2.0)
    half = spec.n / 2.0
    if half == 2.0:
        curv = curv + 1.0
    else:
        curv = curv + (half - 1.0) * (a2 + eps * eps) ** ((half - 2.0) / 2.0)
    main = ops.free_lap.T @ sparse.diags(ops.w * curv) @ ops.free_lap
    slope = ops.w_gamma[:-1] * nonlinearity_slope(v[:-1], spec)
    return (main - sparse.diags(slope)).tocsc()


# ---------------------------------------------------------------------------
# cut-off and endpoint


def _smoothstep(x):
    return x**3 * (10.0 + x * (-15.0 + 6.0 * x))


def cutoff_psi(grid: RadialGrid) -> RadialFunction:
    """Radial cut-off: one on ``r <= 1/2``, zero for ``r >= 1``, quintic in between.

    ``psi(r) = 1 - S(2r - 1)`` with ``S`` the quintic smoothstep, so ``psi``
    is twice continuously differentiable.  Laplacian samples are exact.
    """
    r = grid.nodes
    if r[0] >= 0.5 or r[-1] < 1.0:
        raise ValueError("grid must reach below r = 1/2 and up to r = 1")
    inside = (r > 0.5) & (r < 1.0)
    if np.count_nonzero(inside) < 8:
        raise ValueError("grid too coarse on [1/2, 1] to resolve the cut-off")
    x = np.clip(2.0 * r - 1.0, 0.0, 1.0)
    values = 1.0 - _smoothstep(x)
    d1 = -2.0 * 30.0 * x**2 * (1.0 - x) ** 2
    d2 = -4.0 * 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)
    lap = np.where(inside, d2 + (grid.n - 1.0) * d1 / r, 0.0)
    return RadialFunction(grid, values, lap)


def cutoff_bounds(psi: RadialFunction) -> dict:
    """Sup of ``|psi'|`` and ``|Lap psi|`` on the nodes, plus the plateau checks."""
    r = psi.grid.nodes
    deriv = psi.derivative().values
    lap = psi.laplacian().values
    return {
        "max_grad": float(np.max(np.abs(deriv))),
        "max_lap": float(np.max(np.abs(lap))),
        "plateau": bool(np.all(psi.values[r <= 0.5] == 1.0)),
        "outside": bool(np.all(psi.values[r >= 1.0] == 0.0)),
    }


def _safe_energy(v: np.ndarray, spec: ProblemSpec) -> float:
    try:
        return energy(v, spec)
    except PhiOverflowError:
        return math.nan


def find_endpoint(spec: ProblemSpec) -> tuple[float, np.ndarray]:
    """Smallest ``s = 2**j <= s_max`` with ``J(s psi) < 0``."""
    psi = cutoff_psi(spec.grid).values
    s = 1.0
    while s <= spec.s_max * (1 + 1e-12):
        value = _safe_energy(s * psi, spec)
        if value < 0:
            return s, s * psi
        if math.isnan(value):
            break
        s *= 2.0
    raise EndpointSearchError(
        f"J(s psi) >= 0 for every tried s up to {spec.s_max:g} at lambda={spec.lam:g}; increase lambda or s_max"
    )


# ---------------------------------------------------------------------------
# solver


@dataclass
class SolveReport:
    """Outcome of a mountain-pass run; ``u`` carries the grid Laplacian as samples."""

    u: RadialFunction
    energy: float
    residual: float
    level: float
    c0: float
    below_c0: bool
    converged: bool
    endpoint_scale: float
    sweeps: int
    newton_steps: int
    path_max_history: list = field(default_factory=list)
    residual_history: list = field(default_factory=list)
    rho: float = math.nan
    delta: float = math.nan
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.converged and self.energy > 0

    def to_record(self) -> str:
        """Key=value lines; floats in ``repr`` form so records are exact."""
        items = [
            ("converged", self.converged),
            ("energy", self.energy),
            ("residual", self.residual),
            ("level", self.level),
            ("c0", self.c0),
            ("below_c0", self.below_c0),
            ("endpoint_scale", self.endpoint_scale),
            ("sweeps", self.sweeps),
            ("newton_steps", self.newton_steps),
            ("rho", self.rho),
            ("delta", self.delta),
            ("nodes", self.u.grid.size),
            ("r_max", self.u.grid.r_max),
            ("message", self.message),
        ]
        return "".join(f"{k}={v!r}\n" if isinstance(v, float) else f"{k}={v}\n" for k, v in items)

    def profile_rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.u.r.tolist(), self.u.values.tolist(), self.u.lap.tolist()))


def _full(x: np.ndarray) -> np.ndarray:
    return np.r_[x, 0.0]


def _ray_slope(t: float, w: np.ndarray, spec: ProblemSpec) -> float:
    """``d/dt J(t w)``; overflow of the nonlinearity counts as steeply negative."""
    try:
        return float(weak_gradient(_full(t * w), spec)[:-1] @ w)
    except PhiOverflowError:
        return -math.inf


def _ray_maximizer(w: np.ndarray, spec: ProblemSpec, t_guess: float = 1.0) -> float:
    """The unique ``t > 0`` maximizing ``J(t w)``.

    ``t -> d/dt J(t w) / t**(n/2-1)`` decreases from ``+inf`` to ``-inf``
    because ``p < n/2 < vartheta``, so one bracketed root-find suffices.
    """
    lo = hi = t_guess
    while _ray_slope(lo, w, spec) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise ArithmeticError("energy decreases along the whole ray")
    while _ray_slope(hi, w, spec) >= 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("energy increases along the whole ray")
    # the slope may be -inf (overflow) at hi; tighten before the root-find
    while not math.isfinite(_ray_slope(hi, w, spec)):
        mid = 0.5 * (lo + hi)
        if _ray_slope(mid, w, spec) > 0:
            lo = mid
        else:
            hi = mid
    return optimize.brentq(lambda t: _ray_slope(t, w, spec), lo, hi, xtol=1e-15 * hi, rtol=1e-15)


def _newton(x: np.ndarray, spec: ProblemSpec, history: list) -> tuple[np.ndarray, int, float]:
    """Damped Newton on ``J' = 0`` with backtracking on the relative dual residual."""
    res = residual_norm(_full(x), spec)
    history.append(res)
    steps = 0
    for steps in range(1, spec.max_newton + 1):
        if res <= spec.tol:
            return x, steps - 1, res
        v = _full(x)
        d = weak_gradient(v, spec)[:-1]
        try:
            delta = splinalg.spsolve(_hessian(v, spec), -d)
        except RuntimeError:
            delta = -spec._ops.gram_lu.solve(d)
        if not np.all(np.isfinite(delta)):
            delta = -spec._ops.gram_lu.solve(d)
        tau = 1.0
        while tau > spec.step_tol:
            trial = x + tau * delta
            try:
                trial_res = residual_norm(_full(trial), spec)
            except PhiOverflowError:
                trial_res = math.inf
            if trial_res < (1.0 - 1e-4 * tau) * res:
                x, res = trial, trial_res
                break
            tau *= 0.5
        else:
            history.append(res)
            return x, steps, res
        history.append(res)
    return x, steps, res


def mountain_pass_solve(spec: ProblemSpec, *, path_tol: float = 0.1, with_geometry: bool = True) -> SolveReport:
    """Mountain-pass critical point of the discrete energy.

    Paths are segments from ``0`` through a direction ``w``, extended until
    the energy is negative; the first one points along the endpoint
    ``e = s psi``.  The energy along each segment has a single maximum,
    located by a root-find.  Each sweep moves that maximizer downhill with a
    step preconditioned by ``K`` and re-forms the segment through the moved
    point.  A step is accepted only if the new path maximum is lower, by an
    Armijo margin.  Once the gradient at the maximizer is small relative to
    its operator part the run switches to Newton's method on ``J' = 0``.

    Raises ``EndpointSearchError`` when no admissible endpoint exists.
    """
    ops = spec._ops
    c0 = spec.constants.c0
    s_end, endpoint = find_endpoint(spec)
    w = endpoint[:-1].copy()
    t = _ray_maximizer(w, spec)
    u = t * w
    level = energy(_full(u), spec)
    history = [level]
    step = 1.0
    sweeps = 0
    for sweeps in range(1, spec.max_sweeps + 1):
        d = weak_gradient(_full(u), spec)[:-1]
        direction = -ops.gram_lu.solve(d)
        slope = float(d @ direction)
        scale = ops.dual_norm(_operator_part(_full(u), spec)[:-1])
        if math.sqrt(max(-slope, 0.0)) <= path_tol * scale:
            break
        if len(history) > 20 and history[-21] - level <= 1e-6 * abs(level):
            break
        tau = step
        while tau > spec.step_tol:
            trial_dir = u + tau * direction
            try:
                t_new = _ray_maximizer(trial_dir, spec)
                value = energy(_full(t_new * trial_dir), spec)
            except (ArithmeticError, PhiOverflowError):
                value = math.inf
            if value <= level + 1e-4 * tau * slope:
                u = t_new * trial_dir
                level = value
                history.append(level)
                step = min(2.0 * tau, 1.0)
                break
            tau *= 0.5
        else:
            break
    res_history: list = []
    x, newton_steps, res = _newton(u.copy(), spec, res_history)
    u_star = _full(x)
    value = energy(u_star, spec)
    converged = bool(res <= spec.tol)
    message = "converged" if converged else f"residual {res:.3g} above tolerance {spec.tol:g}"
    u_fn = RadialFunction(spec.grid, u_star, ops.lap @ u_star)
    report = SolveReport(
        u=u_fn,
        energy=value,
        residual=res,
        level=level,
        c0=c0,
        below_c0=bool(max(level, value) < c0),
        converged=converged,
        endpoint_scale=s_end,
        sweeps=sweeps,
        newton_steps=newton_steps,
        path_max_history=history,
        residual_history=res_history,
        message=message,
    )
    if with_geometry:
        report.rho, report.delta, _ = sphere_geometry(spec, extra=[u_star])
    return report


# ---------------------------------------------------------------------------
# diagnostics


def _trial_profiles(spec: ProblemSpec) -> list[np.ndarray]:
    r = spec.grid.nodes
    trials = []
    for radius in np.geomspace(0.02, 0.5 * spec.grid.r_max, 12):
        x = np.clip(2.0 * r / radius - 1.0, 0.0, 1.0)
        trials.append(1.0 - _smoothstep(x))
    edge = spec.grid.r_max
    for width in (0.3, 1.0, 2.0):
        g = np.exp(-((r / width) ** 2))
        trials.append(g - g[-1] * (r / edge) ** 2)
    return trials


def _norm(v: np.ndarray, spec: ProblemSpec) -> float:
    ops = spec._ops
    a = np.abs(ops.lap @ v)
    h = spec.n / 2.0
    half = float(ops.w @ a**h)
    low = float(ops.w @ a**spec.p) ** (1.0 / spec.p)
    return (half + low**h) ** (1.0 / h)


def sphere_geometry(spec: ProblemSpec, radii: Optional[Sequence[float]] = None,
                    extra: Sequence[np.ndarray] = ()):
    """Empirical ``(rho, delta)``: the sampled sphere with the largest minimal energy.

    Spheres are sampled along cut-off dilations, Gaussians and any ``extra``
    directions.  Returns ``(rho, delta, table)`` with ``table`` listing
    ``(rho, min J)``.
    """
    radii = np.geomspace(2.0, 1e-3, 34) if radii is None else np.asarray(radii, dtype=float)
    units = [t / _norm(t, spec) for t in list(_trial_profiles(spec)) + list(extra)]
    table = []
    for rho in radii:
        vals = [_safe_energy(rho * u, spec) for u in units]
        vals = [-math.inf if math.isnan(v) else v for v in vals]
        table.append((float(rho), float(min(vals))))
    best = max(table, key=lambda row: row[1])
    return best[0], best[1], table


@dataclass(frozen=True)
class DiagnosticsSummary:
    rho: float
    delta: float
    geometry_ok: bool
    norm_power: float
    norm_limit: float
    norm_ok: bool
    energy_lower_bound: float
    slack: float
    lower_bound_ok: bool
    below_c0: bool

    @property
    def violations(self) -> list[str]:
        names = [("geometry", self.geometry_ok), ("norm_bound", self.norm_ok),
                 ("energy_lower_bound", self.lower_bound_ok), ("below_c0", self.below_c0)]
        return [name for name, ok in names if not ok]

    def as_rows(self) -> list[tuple[str, object]]:
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__] + [("violations", ";".join(self.violations))]


def diagnostics(spec: ProblemSpec, report: SolveReport) -> DiagnosticsSummary:
    """Mountain-pass geometry, the norm bound below the critical level, and the energy lower bound.

    The lower bound ``J(u) >= (2/n - 1/mu)(||Lu||_p**p + ||Lu||_{n/2}**(n/2))``
    holds at critical points; the slack allowed for an approximate one is
    ``|<J'(u), u>| / mu``.
    """
    v = report.u.values
    if np.isfinite(report.rho) and np.isfinite(report.delta):
        rho, delta = report.rho, report.delta
    else:
        rho, delta, _ = sphere_geometry(spec, extra=[v])
    cs = spec.constants
    first, second, _ = energy_parts(v, spec)
    pow_p = spec.p * first
    pow_half = spec.n * second / 2.0
    lower = (2.0 / spec.n - 1.0 / spec.mu) * (pow_p + pow_half)
    slack = abs(float(weak_gradient(v, spec) @ v)) / spec.mu
    norm_power = _norm(v, spec) ** cs.q_exp
    limit = cs.beta_gamma / spec.alpha0
    return DiagnosticsSummary(
        rho=rho,
        delta=delta,
        geometry_ok=bool(delta > 0),
        norm_power=norm_power,
        norm_limit=limit,
        norm_ok=bool(norm_power < limit),
        energy_lower_bound=lower,
        slack=slack,
        lower_bound_ok=bool(report.energy >= lower - slack),
        below_c0=report.below_c0,
    )


def _straight_path_max(spec: ProblemSpec, endpoint: np.ndarray, images: int = 64) -> float:
    ts = np.linspace(0.0, 1.0, images + 1)[1:-1]
    return max(_safe_energy(t * endpoint, spec) for t in ts)


def find_lambda0(spec: ProblemSpec, lo: float = 1e-3, hi: float = 1e8, iters: int = 40) -> float:
    """Bisection in ``log lambda`` for the smallest ``lambda`` with an admissible endpoint
    and a straight-path maximum below ``c0``.

    The straight path from ``0`` to the endpoint bounds the minimax level from above.
    """
    c0 = spec.constants.c0

    def good(lam: float) -> bool:
        trial = spec.with_lambda(lam)
        try:
            _, e = find_endpoint(trial)
        except EndpointSearchError:
            return False
        return _straight_path_max(trial, e) < c0

    if not good(hi):
        raise EndpointSearchError(f"no admissible lambda up to {hi:g}")
    if good(lo):
        return lo
    a, b = math.log(lo), math.log(hi)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if good(math.exp(mid)):
            b = mid
        else:
            a = mid
    return math.exp(b)
