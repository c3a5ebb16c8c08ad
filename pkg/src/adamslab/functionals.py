"""Norms, singular exponential integrals, dilations and supremum probes.

All suprema here are lower-bound probes over explicit families.  Exponential
integrals are evaluated in log space so that concentrating families never
overflow; a probe row is flagged once its value leaves the double range.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import interpolate, optimize

from .radial_core import (
    RadialFunction,
    RadialGrid,
    adams_beta,
    derived_constants,
    make_log_grid,
    lap_norm,
    truncation_index,
    weighted_lp_norm,
)
from .sequences import PiecewiseRadial, cc_sharpness_family, moser_adams_xi, truncated_log_profile
from .young import MAX_EXPONENT, YoungParams, log_phi

__all__ = [
    "EnormReport",
    "ProbeRow",
    "ProbeTable",
    "adams_functional",
    "atc_identity_rhs",
    "atc_weight",
    "atsc_envelope",
    "atsc_probe",
    "cc_probe",
    "concentration_level",
    "e_norm",
    "embedding_probe",
    "log_adams_functional",
    "log_subcritical_quotient",
    "moser_probe",
    "scale",
    "subcritical_quotient",
]


@dataclass(frozen=True)
class EnormReport:
    dnorm_p: float
    dnorm_half: float
    e_norm: float
    e_norm_alt: float

    def sandwich_ok(self, rtol: float = 1e-12) -> bool:
        lo = self.e_norm * (1 - rtol)
        hi = 2.0 ** (1.0 - 2.0 / self._n) * self.e_norm * (1 + rtol)
        return lo <= self.e_norm_alt <= hi

    _n: int = field(default=4, repr=False)


def _report(dnorm_p: float, dnorm_half: float, n: int) -> EnormReport:
    h = n / 2.0
    e = (dnorm_half**h + dnorm_p**h) ** (1.0 / h)
    return EnormReport(dnorm_p, dnorm_half, e, dnorm_half + dnorm_p, n)


def e_norm(u, p: float, n: Optional[int] = None) -> EnormReport:
    """Both equivalent norms built from ``||Lap u||_p`` and ``||Lap u||_{n/2}``."""
    n = u.n if n is None else n
    if n != u.n:
        raise ValueError("dimension mismatch")
    return _report(lap_norm(u, p), lap_norm(u, n / 2.0), n)


def _young(alpha: float, n: int, p: float) -> YoungParams:
    return YoungParams(alpha, truncation_index(n, p), n / (n - 2.0))


def log_adams_functional(u, alpha: float, gamma: float, p: float) -> float:
    """Natural log of ``integral Phi_alpha(u) |x|**-gamma dx`` (``-inf`` for zero)."""
    if not 0 <= gamma < u.n:
        raise ValueError(f"need 0 <= gamma < n, got {gamma}")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if alpha == 0:
        return -math.inf
    params = _young(alpha, u.n, p)
    return u.log_integrate(lambda v, r: log_phi(v, params), gamma)


def adams_functional(u, alpha: float, gamma: float, p: float) -> float:
    """``omega * integral Phi_{alpha,j0}(u) r**(n-1-gamma) dr``; ``inf`` past the double range.

    ``j0`` is the truncation index belonging to ``(n, p)``.
    """
    value = log_adams_functional(u, alpha, gamma, p)
    return math.exp(value) if value < MAX_EXPONENT else math.inf


def scale(u, lam: float):
    """Dilation ``w(r) = u(lam r)``.

    Closed-form profiles dilate exactly.  Sampled profiles are resampled with
    monotone cubics in ``ln r``; the Laplacian samples are resampled the same
    way and multiplied by ``lam**2``.
    """
    if not lam > 0:
        raise ValueError("dilation factor must be positive")
    if isinstance(u, PiecewiseRadial):
        return u if lam == 1 else u.dilate(lam)
    if lam == 1:
        return u
    grid = u.grid
    t = np.log(grid.nodes)
    target = t + math.log(lam)
    lap = u.laplacian().values
    values = _resample(t, u.values, target)
    lap_new = lam**2 * _resample(t, lap, target)
    return RadialFunction(grid, values, lap_new)


def _resample(t: np.ndarray, y: np.ndarray, target: np.ndarray) -> np.ndarray:
    interp = interpolate.PchipInterpolator(t, y, extrapolate=False)
    out = interp(np.clip(target, t[0], t[-1]))
    out = np.where(target < t[0], y[0], out)
    return np.where(target > t[-1], 0.0, out)


def _quotient_parts(u, ell: float, gamma: float, p: float):
    n = u.n
    half = lap_norm(u, n / 2.0)
    if half > 1 + 1e-9:
        raise ValueError(f"need ||Lap u||_(n/2) <= 1, got {half}")
    if not 0 <= ell < adams_beta(n):
        raise ValueError("need 0 <= ell < beta(n,2)")
    low = lap_norm(u, p)
    if low == 0:
        raise ValueError("the quotient is undefined when ||Lap u||_p = 0")
    p_star = n * p / (n - 2.0 * p)
    return low, p_star * (1.0 - gamma / n)


def log_subcritical_quotient(u, ell: float, gamma: float, p: float) -> float:
    n = u.n
    low, power = _quotient_parts(u, ell, gamma, p)
    if ell == 0:
        return -math.inf
    top = log_adams_functional(u, ell * (1.0 - gamma / n), gamma, p)
    return top - power * math.log(low)


def subcritical_quotient(u, ell: float, gamma: float, p: float) -> float:
    """``integral Phi_{ell(1-gamma/n)}(u)|x|^-gamma / ||Lap u||_p**(p*(1-gamma/n))``."""
    value = log_subcritical_quotient(u, ell, gamma, p)
    return math.exp(value) if value < MAX_EXPONENT else math.inf


# ---------------------------------------------------------------------------
# probe tables


@dataclass(frozen=True)
class ProbeRow:
    param: float
    value: float
    envelope: float
    overflow: bool
    log_value: float = math.nan
    argmax: float = math.nan


@dataclass
class ProbeTable:
    rows: list[ProbeRow]
    label: str = ""

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda row: row.param)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def params(self) -> np.ndarray:
        return np.array([row.param for row in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([row.value for row in self.rows])

    @property
    def log_values(self) -> np.ndarray:
        return np.array([row.log_value for row in self.rows])

    @property
    def envelopes(self) -> np.ndarray:
        return np.array([row.envelope for row in self.rows])

    def to_csv(self, comment: str = "") -> str:
        buf = io.StringIO()
        if comment:
            buf.write(f"# {comment}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["param", "value", "envelope", "overflow"])
        for row in self.rows:
            writer.writerow([_fmt(row.param), _fmt(row.value), _fmt(row.envelope), int(row.overflow)])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


def _row(param, log_value, envelope, argmax=math.nan) -> ProbeRow:
    overflow = not log_value < MAX_EXPONENT
    value = math.inf if overflow else math.exp(log_value)
    return ProbeRow(float(param), value, float(envelope), overflow, float(log_value), float(argmax))


def _log_ks(k_list: Iterable[float], log_k: bool) -> list[float]:
    logs = [float(x) if log_k else math.log(float(x)) for x in k_list]
    if not logs:
        raise ValueError("empty k list")
    return logs


def moser_probe(alpha: float, gamma: float, k_list: Iterable[float], n: int, p: float,
                *, log_k: bool = False) -> ProbeTable:
    """Singular exponential integral along ``xi_k / ||xi_k||`` (the full norm), one row per ``k``.

    Rows carry ``param = ln k``; overflowing values are flagged.
    """
    derived_constants(n, p, gamma)
    rows = []
    for lk in _log_ks(k_list, log_k):
        xi = moser_adams_xi(n=n, log_k=lk)
        unit = xi / e_norm(xi, p).e_norm
        rows.append(_row(lk, log_adams_functional(unit, alpha, gamma, p), math.nan))
    return ProbeTable(rows, "moser")


def concentration_level(norm_u: float, n: int) -> float:
    """``(1 - ||u||**(n/2))**(-2/(n-2))``, infinite when ``||u|| = 1``."""
    if not 0 <= norm_u <= 1:
        raise ValueError("the weak limit must have norm in [0, 1]")
    gap = 1.0 - norm_u ** (n / 2.0)
    return math.inf if gap == 0 else gap ** (-2.0 / (n - 2.0))


def cc_probe(ell: float, delta: float, gamma: float, k_list: Iterable[float], n: int, p: float,
             *, log_k: bool = False) -> ProbeTable:
    """Integral of ``Phi_{ell beta_gamma, j0}(u_k) |x|**-gamma`` along the concentration family.

    ``u_k`` has norm one and tends weakly to a bump of norm ``delta``.
    Rows carry ``param = ln k``.
    """
    cs = derived_constants(n, p, gamma)
    alpha = ell * cs.beta_gamma
    rows = []
    for lk in _log_ks(k_list, log_k):
        _, u_k = cc_sharpness_family(delta=delta, n=n, p=p, log_k=lk)
        rows.append(_row(lk, log_adams_functional(u_k, alpha, gamma, p), math.nan))
    return ProbeTable(rows, "cc")


def atsc_envelope(ell: float, gamma: float, n: int, p: float) -> float:
    """``(1 - (ell/beta)**((n-2)/2))**(-(2 p*/n)(1 - gamma/n))``."""
    beta = adams_beta(n)
    p_star = n * p / (n - 2.0 * p)
    gap = 1.0 - (ell / beta) ** ((n - 2.0) / 2.0)
    return gap ** (-(2.0 * p_star / n) * (1.0 - gamma / n))


def _normalized(profile: PiecewiseRadial) -> PiecewiseRadial:
    return profile / lap_norm(profile, profile.n / 2.0)


DEFAULT_EPS = (0.05, 0.1, 0.2, 0.3, 0.4, 0.45)


def _probe_family(logs: Sequence[float], n: int, families: Sequence[str], eps_list: Sequence[float]):
    out = []
    for lk in logs:
        if "xi" in families:
            out.append(("xi", lk, _normalized(moser_adams_xi(n=n, log_k=lk))))
        if "trunc_log" in families:
            for eps in eps_list:
                profile = truncated_log_profile(math.exp(-lk), eps, n, normalized=True)
                out.append(("trunc_log", lk, _normalized(profile)))
    return out


def atsc_probe(ell_list: Iterable[float], gamma: float, k_list: Iterable[float], n: int, p: float,
               *, log_k: bool = False, families: Sequence[str] = ("xi",),
               eps_list: Sequence[float] = DEFAULT_EPS) -> ProbeTable:
    """For each ``ell``: the best subcritical quotient over concentrating families.

    The default family is ``xi_k / ||Lap xi_k||_(n/2)``.  Adding ``"trunc_log"``
    also scans the truncated logarithm with ``r_cut = 1/k`` for each ``eps`` in
    ``eps_list``, normalized the same way.
    With ``log_k=True`` the entries of ``k_list`` are read as ``ln k``.
    """
    beta = adams_beta(n)
    ells = [float(x) for x in ell_list]
    if any(not 0 < x < beta for x in ells):
        raise ValueError("every ell must lie in (0, beta(n,2))")
    logs = _log_ks(k_list, log_k)
    unknown = set(families) - {"xi", "trunc_log"}
    if unknown or not families:
        raise ValueError(f"unknown families {sorted(unknown)}")
    family = _probe_family(logs, n, families, eps_list)
    rows = []
    for ell in ells:
        best, where = -math.inf, math.nan
        for _, lk, w in family:
            val = log_subcritical_quotient(w, ell, gamma, p)
            if val > best:
                best, where = val, lk
        rows.append(_row(ell, best, atsc_envelope(ell, gamma, n, p), where))
    return ProbeTable(rows, "atsc")


def atc_weight(ell, a: float, b: float, gamma: float, n: int, p: float):
    """``((1 - x**((n-2)a/n)) / x**((n-2)b/n))**((p*/b)(1-gamma/n))`` with ``x = ell/beta``."""
    x = np.asarray(ell, dtype=float) / adams_beta(n)
    p_star = n * p / (n - 2.0 * p)
    base = (1.0 - x ** ((n - 2.0) * a / n)) / x ** ((n - 2.0) * b / n)
    return base ** ((p_star / b) * (1.0 - gamma / n))


def atc_identity_rhs(atsc_samples: ProbeTable, a: float, b: float, gamma: float, n: int, p: float) -> float:
    """Discrete supremum over the table of ``atc_weight * ATSC``."""
    if not len(atsc_samples):
        raise ValueError("empty sample table")
    if not (a > 0 and b > 0):
        raise ValueError("need a, b > 0")
    weights = atc_weight(atsc_samples.params, a, b, gamma, n, p)
    return float(np.max(weights * atsc_samples.values))


# ---------------------------------------------------------------------------
# embedding constant


def _gaussian(width: float, n: int, grid: RadialGrid) -> RadialFunction:
    r = grid.nodes
    z = (r / width) ** 2
    vals = np.exp(-0.5 * z)
    lap = (z - n) * vals / width**2
    return RadialFunction(grid, vals, lap)


def _power_bump(m: float, n: int, grid: RadialGrid) -> RadialFunction:
    r = grid.nodes
    s = np.clip(1.0 - r * r, 0.0, None)
    vals = s**m
    lap = np.where(r < 1, 4.0 * m * (m - 1.0) * r * r * s ** (m - 2.0) - 2.0 * n * m * s ** (m - 1.0), 0.0)
    return RadialFunction(grid, vals, lap)


def _xi_trial(log_k: float, n: int, grid: RadialGrid) -> RadialFunction:
    return moser_adams_xi(n=n, log_k=log_k).on_grid(grid)


_FAMILIES = (
    ("gaussian", _gaussian, (0.3, 3.0)),
    ("bump", _power_bump, (2.5, 12.0)),
    ("xi", _xi_trial, (1.2, 8.0)),
)


def _best_dilation_ratio(u: RadialFunction, rho: float, gamma: float, p: float) -> float:
    """``min over lam of ||u(lam .)|| / ||u(lam .)||_{rho,gamma}`` in closed form.

    Under ``u -> u(lam .)``: ``||Lap||_{n/2}`` is fixed, ``||Lap||_p`` scales by
    ``lam**(2-n/p)`` and the weighted norm by ``lam**(-(n-gamma)/rho)``.
    """
    n = u.n
    h = n / 2.0
    lap = u.laplacian()
    big_a = weighted_lp_norm(lap, h) ** h
    big_b = weighted_lp_norm(lap, p) ** h
    denom = weighted_lp_norm(u, rho, gamma)
    a_exp = n * (n - 2.0 * p) / (2.0 * p)
    b_exp = (n - gamma) * n / (2.0 * rho)
    if big_a == 0 or big_b == 0 or denom == 0:
        return math.inf
    if a_exp > b_exp:
        lam = ((a_exp - b_exp) * big_b / (b_exp * big_a)) ** (1.0 / a_exp)
    else:
        lam = 1.0  # no interior optimum; the unscaled ratio is still an upper bound
    ratio_h = (big_a + lam ** (-a_exp) * big_b) * lam**b_exp
    return ratio_h ** (1.0 / h) / denom


def embedding_probe(rho: float, gamma: float, n: int, p: float, trials: int, *, seed: int = 0,
                    grid: Optional[RadialGrid] = None, history: bool = False):
    """Upper estimate of ``inf ||u|| / ||u||_{rho,gamma}`` over a trial family.

    Trial ``i`` draws a shape parameter of family ``i mod 3`` and refines it by
    a bounded scalar search; the best dilation is applied in closed form.  The
    running minimum is returned (with its history when ``history=True``).
    """
    p_star = n * p / (n - 2.0 * p)
    if not rho >= p_star:
        raise ValueError(f"need rho >= p* = {p_star}")
    if not 0 < gamma < n:
        raise ValueError("need 0 < gamma < n")
    if int(trials) != trials or trials < 1:
        raise ValueError("need at least one trial")
    derived_constants(n, p, gamma)
    grid = grid or make_log_grid(n, 1e-5, 24.0, 2048)
    rng = np.random.default_rng(seed)
    best = math.inf
    trace = []
    for i in range(int(trials)):
        _, build, (lo, hi) = _FAMILIES[i % len(_FAMILIES)]
        start = float(rng.uniform(lo, hi))
        objective = lambda s: _best_dilation_ratio(build(s, n, grid), rho, gamma, p)
        width = 0.25 * (hi - lo)
        res = optimize.minimize_scalar(
            objective, bounds=(max(lo, start - width), min(hi, start + width)), method="bounded",
            options={"xatol": 1e-6 * (hi - lo)},
        )
        val = min(objective(start), float(res.fun))
        best = min(best, val)
        trace.append(best)
    return (best, trace) if history else best
