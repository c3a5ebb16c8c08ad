"""Radial grids, finite-difference operators, weighted integrals and model constants.

Every function in the package is a radial profile ``u(r)`` on ``(0, R_max]``
carrying the ambient dimension ``n``.  Integrals are taken against the
volume element ``omega * r**(n-1-gamma) dr`` with ``omega`` the area of the
unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse, special

__all__ = [
    "ConstantSet",
    "adams_beta",
    "RadialFunction",
    "RadialGrid",
    "derived_constants",
    "gn_ratio",
    "lap_norm",
    "make_log_grid",
    "measures",
    "radial_laplacian",
    "weighted_lp_norm",
]

# Panel degree of the product quadrature in log-radius.
_PANEL_DEGREE = 4
_PANEL_GAUSS = 10


def measures(n: int) -> tuple[float, float]:
    """Return ``(omega, sigma)``: unit-sphere area and unit-ball volume in R^n."""
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n}")
    omega = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    return omega, omega / n


@dataclass(frozen=True)
class ConstantSet:
    """Derived constants for a parameter tuple ``(n, p, gamma[, mu, alpha0])``."""

    n: int
    p: float
    gamma: float
    p_star: float
    j0: int
    omega: float
    sigma: float
    beta_n2: float
    beta_gamma: float
    alpha_n2: float
    mu: Optional[float] = None
    alpha0: Optional[float] = None
    c0: Optional[float] = None

    @property
    def q_exp(self) -> float:
        return self.n / (self.n - 2.0)

    def as_rows(self) -> list[tuple[str, float]]:
        rows = [
            ("n", self.n),
            ("p", self.p),
            ("gamma", self.gamma),
            ("p_star", self.p_star),
            ("j0", self.j0),
            ("omega", self.omega),
            ("sigma", self.sigma),
            ("beta_n2", self.beta_n2),
            ("beta_gamma", self.beta_gamma),
            ("alpha_n2", self.alpha_n2),
        ]
        if self.c0 is not None:
            rows += [("mu", self.mu), ("alpha0", self.alpha0), ("c0", self.c0)]
        return rows


def _check_exponents(n, p, gamma):
    if int(n) != n or n < 4:
        raise ValueError(f"n must be an integer >= 4, got {n}")
    if not 1.0 < p < n / 2.0:
        raise ValueError(f"need 1 < p < n/2, got p={p} for n={n}")
    if not 0.0 <= gamma < n:
        raise ValueError(f"need 0 <= gamma < n, got gamma={gamma}")


def adams_beta(n: int) -> float:
    """Sharp exponent ``n [(n-2) omega**(2/n)]**(n/(n-2))`` for second derivatives."""
    omega, _ = measures(n)
    return n * ((n - 2.0) * omega ** (2.0 / n)) ** (n / (n - 2.0))


def truncation_index(n: int, p: float) -> int:
    """Smallest integer ``j0`` with ``j0 >= p_star (n-2)/n``."""
    p_star = n * p / (n - 2.0 * p)
    x = p_star * (n - 2.0) / n
    j0 = math.ceil(x - 1e-12 * max(1.0, x))
    return max(int(j0), 1)


def derived_constants(n, p, gamma, mu=None, alpha0=None) -> ConstantSet:
    """Compute every model constant; ``c0`` needs both ``mu`` and ``alpha0``."""
    _check_exponents(n, p, gamma)
    n = int(n)
    omega, sigma = measures(n)
    p_star = n * p / (n - 2.0 * p)
    beta = adams_beta(n)
    beta_gamma = (1.0 - gamma / n) * beta
    c0 = None
    if mu is not None or alpha0 is not None:
        if mu is None or alpha0 is None:
            raise ValueError("c0 needs both mu and alpha0")
        if mu <= n / 2.0:
            raise ValueError(f"need mu > n/2, got {mu}")
        if alpha0 <= 0:
            raise ValueError(f"need alpha0 > 0, got {alpha0}")
        ratio = (2.0 * mu - n) / (n * mu)
        level = beta_gamma / alpha0
        first = 2.0 ** (-n / 2.0) * ratio ** (n / (2.0 * p)) * level ** ((n - 2.0) / 2.0)
        second = 2.0 ** (-p) * ratio * level ** ((n - 2.0) * p / n)
        c0 = min(first, second)
    return ConstantSet(
        n=n,
        p=float(p),
        gamma=float(gamma),
        p_star=p_star,
        j0=truncation_index(n, p),
        omega=omega,
        sigma=sigma,
        beta_n2=beta,
        beta_gamma=beta_gamma,
        alpha_n2=omega * (n - 2.0),
        mu=None if mu is None else float(mu),
        alpha0=None if alpha0 is None else float(alpha0),
        c0=c0,
    )


# ---------------------------------------------------------------------------
# grids


def _fd_rows(z: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivative weights at points ``z`` from stencils ``x``.

    ``x`` has shape (m, s); solves the local Taylor systems in scaled coordinates.
    """
    d = x - z[:, None]
    scale = np.max(np.abs(d), axis=1)
    y = d / scale[:, None]
    s = x.shape[1]
    powers = np.arange(s)
    fact = special.factorial(powers)
    a = y[:, None, :] ** powers[None, :, None] / fact[None, :, None]
    rhs = np.zeros((x.shape[0], s, 2))
    rhs[:, 1, 0] = 1.0
    rhs[:, 2, 1] = 1.0
    w = np.linalg.solve(a, rhs)
    return w[:, :, 0] / scale[:, None], w[:, :, 1] / scale[:, None] ** 2


class RadialGrid:
    """Strictly increasing radii with dimension and quadrature attached.

    Integrals use a product rule in ``t = ln r``: the profile is interpolated
    by quartic Lagrange panels while the factor ``r**(n-gamma)`` is integrated
    by Gauss points, then the ball below the first node is added with the
    profile frozen at its first value (even extension).
    """

    def __init__(self, n: int, nodes):
        nodes = np.array(nodes, dtype=float)
        if int(n) != n or n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {n}")
        if nodes.ndim != 1 or nodes.size < 5:
            raise ValueError("a grid needs at least 5 nodes")
        if not np.all(np.isfinite(nodes)) or nodes[0] <= 0 or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be finite, positive and strictly increasing")
        nodes.setflags(write=False)
        self.n = int(n)
        self.nodes = nodes
        self._weights: dict[float, np.ndarray] = {}
        self._ops = None

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def omega(self) -> float:
        return measures(self.n)[0]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"RadialGrid(n={self.n}, M={self.size}, r=[{self.nodes[0]:.3g}, {self.nodes[-1]:.3g}])"

    def weights_for(self, gamma: float = 0.0) -> np.ndarray:
        """Weights ``w`` with ``sum(w f) ~ integral_0^R f(r) r**(n-1-gamma) dr``."""
        gamma = float(gamma)
        if not gamma < self.n:
            raise ValueError(f"weight exponent gamma={gamma} must be below n={self.n}")
        if gamma not in self._weights:
            w = _product_weights(np.log(self.nodes), self.n - gamma)
            w.setflags(write=False)
            self._weights[gamma] = w
        return self._weights[gamma]

    @property
    def weights(self) -> np.ndarray:
        return self.weights_for(0.0)

    def _operators(self):
        if self._ops is None:
            self._ops = _build_operators(self.nodes, self.n)
        return self._ops

    @property
    def laplacian_matrix(self) -> sparse.csr_matrix:
        return self._operators()[1]

    @property
    def derivative_matrix(self) -> sparse.csr_matrix:
        return self._operators()[0]

    def function(self, values, lap=None) -> "RadialFunction":
        return RadialFunction(self, values, lap)

    def sample(self, fn: Callable[[np.ndarray], np.ndarray]) -> "RadialFunction":
        return RadialFunction(self, fn(self.nodes))


def _product_weights(t: np.ndarray, c: float) -> np.ndarray:
    m = t.size
    cells = m - 1
    w = np.zeros(m)
    lead = cells % _PANEL_DEGREE
    panels = []
    if lead:
        panels.append(np.arange(0, lead + 1))
    starts = np.arange(lead, cells, _PANEL_DEGREE)
    gx, gw = np.polynomial.legendre.leggauss(_PANEL_GAUSS)
    for idx in panels:
        _accumulate_panel(w, t, idx[None, :], c, gx, gw)
    if starts.size:
        idx = starts[:, None] + np.arange(_PANEL_DEGREE + 1)[None, :]
        _accumulate_panel(w, t, idx, c, gx, gw)
    # ball below the first node: profile frozen at its first sample
    w[0] += math.exp(c * t[0]) / c
    return w


def _accumulate_panel(w, t, idx, c, gx, gw):
    tp = t[idx]  # (P, d+1)
    a, b = tp[:, :1], tp[:, -1:]
    half = 0.5 * (b - a)
    tg = 0.5 * (a + b) + half * gx[None, :]  # (P, G)
    scale = half * gw[None, :] * np.exp(c * tg)
    d = tp.shape[1]
    for j in range(d):
        basis = np.ones_like(tg)
        for k in range(d):
            if k != j:
                basis *= (tg - tp[:, k : k + 1]) / (tp[:, j : j + 1] - tp[:, k : k + 1])
        np.add.at(w, idx[:, j], np.sum(scale * basis, axis=1))


def _build_operators(r: np.ndarray, n: int):
    m = r.size
    s = 5
    cols = np.empty((m, s), dtype=int)
    pts = np.empty((m, s))
    # interior and right boundary: plain index windows
    for i in range(m):
        lo = min(max(i - 2, 0), m - s)
        cols[i] = np.arange(lo, lo + s)
        pts[i] = r[lo : lo + s]
    # first two rows: even extension through the origin
    cols[0] = [1, 0, 0, 1, 2]
    pts[0] = [-r[1], -r[0], r[0], r[1], r[2]]
    cols[1] = [0, 0, 1, 2, 3]
    pts[1] = [-r[0], r[0], r[1], r[2], r[3]]
    d1, d2 = _fd_rows(r, pts)
    rows = np.repeat(np.arange(m), s)
    first = sparse.csr_matrix((d1.ravel(), (rows, cols.ravel())), shape=(m, m))
    lap = d2 + (n - 1) * d1 / r[:, None]
    laplacian = sparse.csr_matrix((lap.ravel(), (rows, cols.ravel())), shape=(m, m))
    first.sum_duplicates()
    laplacian.sum_duplicates()
    return first, laplacian


def make_log_grid(n: int, r_min: float, r_max: float, M: int) -> RadialGrid:
    """Geometrically spaced grid of ``M`` nodes from ``r_min`` to ``r_max``."""
    if not (np.isfinite(r_min) and np.isfinite(r_max)) or not 0 < r_min < r_max:
        raise ValueError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    if int(M) != M or M < 16:
        raise ValueError(f"need at least 16 nodes, got {M}")
    return RadialGrid(n, np.geomspace(r_min, r_max, int(M)))


# ---------------------------------------------------------------------------
# sampled profiles


class RadialFunction:
    """Samples of a radial profile on a grid, optionally with Laplacian samples."""

    def __init__(self, grid: RadialGrid, values, lap=None):
        values = np.array(values, dtype=float)
        if values.shape != grid.nodes.shape:
            raise ValueError("values must have one entry per node")
        if not np.all(np.isfinite(values)):
            raise ValueError("profile values must be finite")
        values.setflags(write=False)
        if lap is not None:
            lap = np.array(lap, dtype=float)
            if lap.shape != values.shape:
                raise ValueError("Laplacian samples must match the grid")
            lap.setflags(write=False)
        self.grid = grid
        self.values = values
        self.lap = lap

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def __repr__(self) -> str:
        return f"RadialFunction({self.grid!r})"

    def __mul__(self, c: float) -> "RadialFunction":
        lap = None if self.lap is None else c * self.lap
        return RadialFunction(self.grid, c * self.values, lap)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "RadialFunction":
        return self * (1.0 / c)

    def laplacian(self) -> "RadialFunction":
        """Stored Laplacian samples if present, else the finite-difference one."""
        if self.lap is not None:
            return RadialFunction(self.grid, self.lap)
        return radial_laplacian(self)

    def derivative(self) -> "RadialFunction":
        return RadialFunction(self.grid, self.grid.derivative_matrix @ self.values)

    def integrate(self, integrand: Callable, gamma: float = 0.0) -> float:
        """``omega * integral integrand(u, r) r**(n-1-gamma) dr`` on the grid."""
        vals = integrand(self.values, self.r)
        return self.grid.omega * float(np.dot(self.grid.weights_for(gamma), vals))

    def log_integrate(self, log_integrand: Callable, gamma: float = 0.0) -> float:
        """Log of a positive integral given the log of its integrand."""
        logs = np.asarray(log_integrand(self.values, self.r), dtype=float)
        w = self.grid.weights_for(gamma)
        mask = (w > 0) & np.isfinite(logs)
        if not np.any(mask):
            return -math.inf
        return math.log(self.grid.omega) + float(special.logsumexp(logs[mask], b=w[mask]))

    def to_grid(self, grid: RadialGrid) -> "RadialFunction":
        if grid is self.grid:
            return self
        raise ValueError("sampled profiles cannot be moved between grids; use scale()")


def radial_laplacian(u: RadialFunction) -> RadialFunction:
    """Finite-difference ``u'' + (n-1) u'/r`` with five-point stencils."""
    if u.grid.size < 5:
        raise ValueError("the Laplacian stencil needs at least 5 nodes")
    return RadialFunction(u.grid, u.grid.laplacian_matrix @ u.values)


def weighted_lp_norm(f, p_exp: float, gamma: float = 0.0) -> float:
    """``(integral |f|**p_exp |x|**-gamma dx)**(1/p_exp)`` for a radial profile."""
    if p_exp < 1:
        raise ValueError(f"need p_exp >= 1, got {p_exp}")
    if not 0 <= gamma < f.n:
        raise ValueError(f"need 0 <= gamma < n, got {gamma}")
    total = f.integrate(lambda v, r: np.abs(v) ** p_exp, gamma)
    return total ** (1.0 / p_exp)


def lap_norm(u, t: float) -> float:
    """``||Lap u||_t``, from a closed form when the profile provides one."""
    closed = getattr(u, "lap_norm_fn", None)
    if closed is not None:
        return float(closed(t))
    return weighted_lp_norm(u.laplacian(), t)


def gn_ratio(u, t: float) -> float:
    """``||u'||_t / (||Lap u||_t ||u||_t)**(1/2)``, a Gagliardo-Nirenberg quotient."""
    norm_u = weighted_lp_norm(u, t)
    norm_lap = weighted_lp_norm(u.laplacian(), t)
    if norm_u == 0 or norm_lap == 0:
        raise ValueError("the quotient is undefined for the zero function")
    return weighted_lp_norm(u.derivative(), t) / math.sqrt(norm_lap * norm_u)
