"""Closed-form radial families with exact piecewise Laplacians.

``PiecewiseRadial`` stores, per radial interval, callables for the value, the
radial derivative and the Laplacian.  Integrals are evaluated piece by piece
with Gauss rules, so jumps of the Laplacian at junctions cost no accuracy.

Large concentration parameters are passed as ``L = ln k`` to keep every
intermediate quantity finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from .radial_core import RadialFunction, RadialGrid, adams_beta, measures

__all__ = [
    "Piece",
    "PiecewiseRadial",
    "cc_sharpness_family",
    "collar_polynomial",
    "moser_adams_xi",
    "smoothing_polynomial",
    "theta_bound",
    "truncated_log_profile",
    "xi_closed_form",
]

_JACOBI_POINTS = 64
_LEGENDRE_POINTS = 16
# graded log-radius mesh: first cell, growth factor, widths beyond which it is used
_FIRST_CELL = 0.1
_GROWTH = 1.2
_UNIFORM_CELL = 0.25
_GRADED_ABOVE = 4.0

Fn = Callable[[np.ndarray], np.ndarray]


def _zero(tau):
    return np.zeros_like(np.asarray(tau, dtype=float))


@dataclass(frozen=True)
class Piece:
    """One radial interval ``exp(log_lo) <= r < exp(log_hi)``.

    All callables take ``tau = ln r``.  ``deriv`` is ``du/dr`` and ``lap`` the
    radial Laplacian; ``log_abs_lap`` optionally gives ``ln|lap|`` directly so
    that norms of steep profiles never leave the double range.  The first
    piece of a profile has ``log_lo = -inf``.
    """

    log_lo: float
    log_hi: float
    value: Fn
    deriv: Fn
    lap: Optional[Fn]
    log_abs_lap: Optional[Fn] = None

    @property
    def lo(self) -> float:
        return math.exp(self.log_lo)

    @property
    def hi(self) -> float:
        return math.exp(self.log_hi)


@lru_cache(maxsize=64)
def _jacobi_rule(c: float):
    return special.roots_jacobi(_JACOBI_POINTS, 0.0, c - 1.0)


_LEG_X, _LEG_W = np.polynomial.legendre.leggauss(_LEGENDRE_POINTS)


def _graded_edges(lo: float, hi: float) -> np.ndarray:
    width = hi - lo
    if width <= _GRADED_ABOVE:
        parts = max(16, math.ceil(width / _UNIFORM_CELL))
        return np.linspace(lo, hi, parts + 1)
    cap = max(1.0, width / 4000.0)
    steps, total = [], 0.0
    h = _FIRST_CELL
    while total + h < 0.5 * width:
        steps.append(h)
        total += h
        h = min(h * _GROWTH, cap)
    fill = width - 2.0 * total
    middle = max(1, math.ceil(fill / cap))
    widths = np.r_[steps, np.full(middle, fill / middle), steps[::-1]]
    edges = lo + np.r_[0.0, np.cumsum(widths)]
    edges[-1] = hi
    return edges


@lru_cache(maxsize=256)
def _piece_log_nodes(log_lo: float, log_hi: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``tau`` and log-weights for ``integral f(r) r**(c-1) dr`` over the piece."""
    if log_lo == -math.inf:
        x, w = _jacobi_rule(c)
        tau = log_hi + np.log1p(x) - math.log(2.0)
        return tau, np.log(w) + c * (log_hi - math.log(2.0))
    edges = _graded_edges(log_lo, log_hi)
    half = 0.5 * np.diff(edges)
    tau = (0.5 * (edges[1:] + edges[:-1]))[:, None] + half[:, None] * _LEG_X[None, :]
    logw = np.log(half[:, None] * _LEG_W[None, :]) + c * tau
    return tau.ravel(), logw.ravel()


def _log_radius(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radii must be nonnegative")
    with np.errstate(divide="ignore"):
        return np.log(r)


class PiecewiseRadial:
    """Radial profile given piecewise in closed form, zero beyond its support."""

    def __init__(self, n: int, pieces: Sequence[Piece], label: str = "", params: Optional[dict] = None,
                 lap_norm_fn: Optional[Callable[[float], float]] = None):
        pieces = tuple(pieces)
        if not pieces or pieces[0].log_lo != -math.inf:
            raise ValueError("pieces must start at r = 0")
        for a, b in zip(pieces, pieces[1:]):
            if a.log_hi != b.log_lo:
                raise ValueError("pieces must be contiguous")
        for piece in pieces:
            if not piece.log_hi > piece.log_lo:
                raise ValueError("empty piece")
        self.n = int(n)
        self.pieces = pieces
        self.label = label
        self.params = dict(params or {})
        self._closed_norm = lap_norm_fn

    def __repr__(self) -> str:
        return f"PiecewiseRadial({self.label or 'profile'}, n={self.n}, pieces={len(self.pieces)})"

    @property
    def lap_norm_fn(self) -> Optional[Callable[[float], float]]:
        """``t -> ||Lap u||_t``: a closed form if known, else log-space quadrature if possible."""
        if self._closed_norm is not None:
            return self._closed_norm
        if all(p.log_abs_lap is not None for p in self.pieces):
            return self._log_space_lap_norm
        return None

    def _log_space_lap_norm(self, t: float) -> float:
        logs, logw = [], []
        for piece in self.pieces:
            tau, lw = _piece_log_nodes(piece.log_lo, piece.log_hi, float(self.n))
            with np.errstate(divide="ignore"):
                logs.append(t * piece.log_abs_lap(tau))
            logw.append(lw)
        total = _masked_logsumexp(np.concatenate(logs) + np.concatenate(logw))
        return math.exp((math.log(measures(self.n)[0]) + total) / t)

    @property
    def log_support(self) -> float:
        return self.pieces[-1].log_hi

    @property
    def support(self) -> float:
        return math.exp(self.log_support)

    @property
    def junctions(self) -> list[float]:
        return [piece.hi for piece in self.pieces[:-1]]

    def _eval(self, r, attr: str) -> np.ndarray:
        tau = _log_radius(r)
        out = np.zeros_like(tau)
        for i, piece in enumerate(self.pieces):
            fn = getattr(piece, attr)
            if fn is None:
                raise ValueError("this profile carries no Laplacian")
            last = i == len(self.pieces) - 1
            mask = (tau >= piece.log_lo) & ((tau <= piece.log_hi) if last else (tau < piece.log_hi))
            if np.any(mask):
                out[mask] = fn(tau[mask])
        return out

    def __call__(self, r):
        return self._eval(r, "value")

    def deriv_at(self, r):
        return self._eval(r, "deriv")

    def lap_at(self, r):
        return self._eval(r, "lap")

    def junction_mismatch(self) -> float:
        """Largest jump of the value across interior junctions and at the edge of the support."""
        gaps = [0.0]
        for a, b in zip(self.pieces, self.pieces[1:]):
            x = np.array([a.log_hi])
            gaps.append(abs(float(a.value(x)[0] - b.value(x)[0])))
        gaps.append(abs(float(self.pieces[-1].value(np.array([self.log_support]))[0])))
        return max(gaps)

    def derivative_mismatch(self) -> float:
        gaps = [0.0]
        for a, b in zip(self.pieces, self.pieces[1:]):
            x = np.array([a.log_hi])
            gaps.append(abs(float(a.deriv(x)[0] - b.deriv(x)[0])))
        return max(gaps)

    # -- algebra ---------------------------------------------------------------
    def __mul__(self, c: float) -> "PiecewiseRadial":
        c = float(c)
        log_c = math.log(abs(c)) if c != 0 else -math.inf
        pieces = [
            Piece(
                p.log_lo,
                p.log_hi,
                lambda x, f=p.value: c * f(x),
                lambda x, f=p.deriv: c * f(x),
                None if p.lap is None else (lambda x, f=p.lap: c * f(x)),
                None if p.log_abs_lap is None else (lambda x, f=p.log_abs_lap: log_c + f(x)),
            )
            for p in self.pieces
        ]
        norm_fn = None
        if self._closed_norm is not None:
            norm_fn = lambda t, g=self._closed_norm: abs(c) * g(t)
        return PiecewiseRadial(self.n, pieces, self.label, self.params, norm_fn)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "PiecewiseRadial":
        return self * (1.0 / c)

    def disjoint_sum(self, other: "PiecewiseRadial") -> "PiecewiseRadial":
        """Sum of two profiles whose nonzero pieces do not overlap."""
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        first, second = (self, other) if self.log_support <= other.log_support else (other, self)
        edge = first.log_support
        inner = [p for p in second.pieces if p.log_lo >= edge]
        if not inner:
            raise ValueError("profiles overlap")
        for p in second.pieces:
            if p.log_lo < edge:
                lo = max(p.log_lo, edge - 50.0)
                probe = np.linspace(lo, min(p.log_hi, edge), 9)
                if np.any(p.value(probe) != 0):
                    raise ValueError("profiles overlap")
        pieces = list(first.pieces)
        if inner[0].log_lo > edge:
            pieces.append(Piece(edge, inner[0].log_lo, _zero, _zero, _zero, _minus_inf))
        pieces += inner
        return PiecewiseRadial(self.n, pieces, f"{first.label}+{second.label}")

    def dilate(self, lam: float) -> "PiecewiseRadial":
        """``w(r) = u(lam r)`` with exact derivative and Laplacian."""
        if not lam > 0:
            raise ValueError("dilation factor must be positive")
        shift = math.log(lam)
        two_shift = 2.0 * shift
        pieces = [
            Piece(
                p.log_lo - shift,
                p.log_hi - shift,
                lambda x, f=p.value: f(x + shift),
                lambda x, f=p.deriv: lam * f(x + shift),
                None if p.lap is None else (lambda x, f=p.lap: lam**2 * f(x + shift)),
                None if p.log_abs_lap is None else (lambda x, f=p.log_abs_lap: two_shift + f(x + shift)),
            )
            for p in self.pieces
        ]
        norm_fn = None
        if self._closed_norm is not None:
            norm_fn = lambda t, g=self._closed_norm: lam ** (2.0 - self.n / t) * g(t)
        return PiecewiseRadial(self.n, pieces, self.label, self.params, norm_fn)

    def laplacian(self) -> "PiecewiseRadial":
        pieces = []
        for p in self.pieces:
            if p.lap is None:
                raise ValueError("this profile carries no Laplacian")
            pieces.append(Piece(p.log_lo, p.log_hi, p.lap, _nan_like, None))
        return PiecewiseRadial(self.n, pieces, f"lap({self.label})")

    def derivative(self) -> "PiecewiseRadial":
        pieces = [Piece(p.log_lo, p.log_hi, p.deriv, _nan_like, None) for p in self.pieces]
        return PiecewiseRadial(self.n, pieces, f"d({self.label})")

    def on_grid(self, grid: RadialGrid) -> RadialFunction:
        if grid.n != self.n:
            raise ValueError("grid dimension does not match the profile")
        lap = None
        if all(p.lap is not None for p in self.pieces):
            lap = self.lap_at(grid.nodes)
        return RadialFunction(grid, self(grid.nodes), lap)

    # -- integration -----------------------------------------------------------
    def _quadrature(self, gamma: float):
        if not gamma < self.n:
            raise ValueError("weight exponent must be below n")
        c = self.n - gamma
        for piece in self.pieces:
            tau, logw = _piece_log_nodes(piece.log_lo, piece.log_hi, c)
            yield piece, tau, logw

    def integrate(self, integrand: Callable, gamma: float = 0.0) -> float:
        """``omega * integral integrand(u, r) r**(n-1-gamma) dr`` over the support."""
        total = 0.0
        for piece, tau, logw in self._quadrature(gamma):
            total += float(np.dot(np.exp(logw), integrand(piece.value(tau), np.exp(tau))))
        return measures(self.n)[0] * total

    def log_integrate(self, log_integrand: Callable, gamma: float = 0.0) -> float:
        """Log of a positive integral from the log of its integrand."""
        terms = []
        for piece, tau, logw in self._quadrature(gamma):
            terms.append(np.asarray(log_integrand(piece.value(tau), np.exp(tau)), dtype=float) + logw)
        return math.log(measures(self.n)[0]) + _masked_logsumexp(np.concatenate(terms))


def _masked_logsumexp(logs: np.ndarray) -> float:
    mask = np.isfinite(logs)
    if not np.any(mask):
        return -math.inf
    return float(special.logsumexp(logs[mask]))


def _nan_like(tau):
    return np.full_like(np.asarray(tau, dtype=float), np.nan)


def _minus_inf(tau):
    return np.full_like(np.asarray(tau, dtype=float), -np.inf)


# ---------------------------------------------------------------------------
# Moser-Adams concentrating sequence


@lru_cache(maxsize=None)
def collar_polynomial() -> Polynomial:
    """Quintic ``q(x)``, ``x = r - 1``: ``q(0)=0, q'(0)=-1, q''(0)=1`` and flat of order 2 at ``x = 1``.

    Times the log-slope coefficient it continues ``C ln(1/r)`` past ``r = 1``
    with matching value, slope and curvature, then vanishes to second order at ``r = 2``.
    """
    # q = -x + x^2/2 + a x^3 + b x^4 + c x^5
    lhs = np.array([[1.0, 1.0, 1.0], [3.0, 4.0, 5.0], [6.0, 12.0, 20.0]])
    rhs = np.array([1.0 - 0.5, 1.0 - 1.0, -1.0])
    a, b, c = np.linalg.solve(lhs, rhs)
    return Polynomial([0.0, -1.0, 0.5, a, b, c])


def _xi_coefficients(log_k: float, n: int):
    beta = adams_beta(n)
    head = (log_k / beta) ** (1.0 - 2.0 / n)
    curv = n * beta ** (2.0 / n - 1.0) / (2.0 * log_k ** (2.0 / n))
    slope = 2.0 * curv
    return beta, head, curv, slope


def _log_abs(x):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(x))


def moser_adams_xi(k: Optional[float] = None, n: int = 4, *, log_k: Optional[float] = None) -> PiecewiseRadial:
    """Concentrating profile: parabolic cap, logarithmic annulus, smooth collar on ``[1, 2]``.

    Pass either ``k`` or ``log_k = ln k``; the latter avoids overflow for huge ``k``.
    """
    if (k is None) == (log_k is None):
        raise ValueError("give exactly one of k or log_k")
    if log_k is None:
        if not k >= 3:
            raise ValueError(f"need k >= 3, got {k}")
        log_k = math.log(k)
    if not log_k > 1:
        raise ValueError(f"need ln k > 1, got {log_k}")
    if int(n) != n or n < 4:
        raise ValueError("dimension must be an integer >= 4")
    n = int(n)
    beta, head, curv, slope = _xi_coefficients(log_k, n)
    log_rho = -log_k / n
    q = collar_polynomial()
    dq, ddq = q.deriv(), q.deriv(2)
    log_cap_lap = math.log(2.0 * n * curv) - 2.0 * log_rho

    def collar_lap(x):
        r = np.exp(x)
        return slope * (ddq(r - 1.0) + (n - 1.0) * dq(r - 1.0) / r)

    inner = Piece(
        -math.inf,
        log_rho,
        lambda x: head + curv * -np.expm1(2.0 * (x - log_rho)),
        lambda x: -2.0 * curv * np.exp(x - 2.0 * log_rho),
        lambda x: np.full_like(x, -math.exp(log_cap_lap)),
        lambda x: np.full_like(x, log_cap_lap),
    )
    middle = Piece(
        log_rho,
        0.0,
        lambda x: -slope * x,
        lambda x: -slope * np.exp(-x),
        lambda x: -(n - 2.0) * slope * np.exp(-2.0 * x),
        lambda x: math.log((n - 2.0) * slope) - 2.0 * x,
    )
    collar = Piece(
        0.0,
        math.log(2.0),
        lambda x: slope * q(np.exp(x) - 1.0),
        lambda x: slope * dq(np.exp(x) - 1.0),
        collar_lap,
        lambda x: _log_abs(collar_lap(x)),
    )
    norm_fn = lambda t: _xi_norm(log_k, n, t)
    return PiecewiseRadial(n, [inner, middle, collar], "xi", {"log_k": log_k, "beta": beta}, norm_fn)


def _collar_integral(n: int, t: float) -> float:
    """``omega * integral_1^2 |q'' + (n-1) q'/r|**t r**(n-1) dr``."""
    q = collar_polynomial()
    dq, ddq = q.deriv(), q.deriv(2)
    tau, logw = _piece_log_nodes(0.0, math.log(2.0), float(n))
    r = np.exp(tau)
    return measures(n)[0] * float(np.dot(np.exp(logw), np.abs(ddq(r - 1) + (n - 1) * dq(r - 1) / r) ** t))


def _xi_log_terms(log_k: float, n: int, t: float) -> tuple[float, float, float]:
    """Logs of the disc, annulus and collar parts of ``||Lap xi_k||_t**t``."""
    log_omega = math.log(measures(n)[0])
    beta = adams_beta(n)
    log_slope = math.log(n) + (2.0 / n - 1.0) * math.log(beta) - (2.0 / n) * math.log(log_k)
    # disc: constant Laplacian n * slope * e^{2L/n} over a ball of radius e^{-L/n}
    disc = log_omega - math.log(n) + t * (math.log(n) + log_slope) + (2.0 * t / n - 1.0) * log_k
    expo = n - 2.0 * t
    if abs(expo) < 1e-14:
        radial = math.log(log_k / n)
    elif expo > 0:
        radial = math.log(-math.expm1(-expo * log_k / n) / expo)
    else:
        # grows like e^{|expo| L/n}
        radial = -expo * log_k / n + math.log(-math.expm1(expo * log_k / n) / -expo)
    annulus = log_omega + t * (math.log(n - 2.0) + log_slope) + radial
    collar = t * log_slope + math.log(_collar_integral(n, t))
    return disc, annulus, collar


def xi_closed_form(log_k: float, n: int, t: float) -> dict:
    """Piece contributions to ``||Lap xi_k||_t**t`` from the radial formulas.

    The disc and annulus terms are closed-form; the collar term is the fixed
    polynomial integral scaled by the log-slope coefficient.  Raises
    ``OverflowError`` when a contribution leaves the double range.
    """
    disc, annulus, collar = (math.exp(x) for x in _xi_log_terms(log_k, n, t))
    return {"disc": disc, "annulus": annulus, "collar": collar, "total": disc + annulus + collar}


def _xi_norm(log_k: float, n: int, t: float) -> float:
    return math.exp(special.logsumexp(_xi_log_terms(log_k, n, t)) / t)


# ---------------------------------------------------------------------------
# truncated logarithm profile


@lru_cache(maxsize=None)
def smoothing_polynomial() -> Polynomial:
    """Quintic cap ``f`` with ``f(0)=f'(0)=f''(0)=0`` and ``f(1)=f'(1)=1, f''(1)=0``."""
    return Polynomial([0.0, 0.0, 0.0, 6.0, -8.0, 3.0])


def _sup_on_unit(poly: Polynomial) -> float:
    crit = [x.real for x in poly.deriv().roots() if abs(x.imag) < 1e-12 and 0 <= x.real <= 1]
    pts = np.array([0.0, 1.0] + crit)
    return float(np.max(np.abs(poly(pts))))


def theta_bound(r_cut: float, eps: float, n: int) -> float:
    """Explicit upper bound ``1 + 2 eps (sup|f'| + sup|f''|/(eps (n-2) L))**(n/2)``."""
    f = smoothing_polynomial()
    log_r = math.log(1.0 / r_cut)
    inner = _sup_on_unit(f.deriv()) + _sup_on_unit(f.deriv(2)) / (eps * (n - 2.0) * log_r)
    return 1.0 + 2.0 * eps * inner ** (n / 2.0)


def truncated_log_profile(r_cut: float, eps: float, n: int, *, normalized: bool = False) -> PiecewiseRadial:
    """``v(s) = Psi(ln(1/s)/ln(1/r_cut))``: one on ``B_{r_cut}``, zero outside the unit ball.

    ``Psi`` is the identity on ``[eps, 1-eps]``, bent by ``eps f(t/eps)`` at the
    bottom and ``1 - eps f((1-t)/eps)`` at the top.  With ``normalized=True`` the
    profile is multiplied by ``ln(1/r_cut)**(1-2/n)``.
    """
    if not 0 < r_cut < 1:
        raise ValueError("need 0 < r_cut < 1")
    if not 0 < eps < 0.5:
        raise ValueError("need 0 < eps < 1/2")
    if int(n) != n or n < 4:
        raise ValueError("dimension must be an integer >= 4")
    n = int(n)
    big_l = math.log(1.0 / r_cut)
    f = smoothing_polynomial()
    df, ddf = f.deriv(), f.deriv(2)
    log_big_l = math.log(big_l)

    def build(psi, dpsi, ddpsi):
        # t = ln(1/s) / L = -tau / L
        def lap_factor(x):
            t = -x / big_l
            return ddpsi(t) / big_l - (n - 2.0) * dpsi(t)

        value = lambda x: psi(-x / big_l)
        deriv = lambda x: -dpsi(-x / big_l) * np.exp(-x) / big_l
        lap = lambda x: lap_factor(x) * np.exp(-2.0 * x) / big_l
        log_lap = lambda x: _log_abs(lap_factor(x)) - 2.0 * x - log_big_l
        return value, deriv, lap, log_lap

    top = build(
        lambda t: 1.0 - eps * f((1.0 - t) / eps),
        lambda t: df((1.0 - t) / eps),
        lambda t: -ddf((1.0 - t) / eps) / eps,
    )
    mid = build(lambda t: t, lambda t: np.ones_like(t), lambda t: np.zeros_like(t))
    low = build(
        lambda t: eps * f(t / eps),
        lambda t: df(t / eps),
        lambda t: ddf(t / eps) / eps,
    )
    t1, t2, t3 = -big_l, -(1.0 - eps) * big_l, -eps * big_l
    pieces = [
        Piece(-math.inf, t1, lambda x: np.ones_like(x), _zero, _zero, _minus_inf),
        Piece(t1, t2, *top),
        Piece(t2, t3, *mid),
        Piece(t3, 0.0, *low),
    ]
    profile = PiecewiseRadial(n, pieces, "trunc_log", {"r_cut": r_cut, "eps": eps, "log_r": big_l})
    if normalized:
        scaled = profile * big_l ** (1.0 - 2.0 / n)
        scaled.params = dict(profile.params, normalized=True)
        return scaled
    return profile


# ---------------------------------------------------------------------------
# concentration-compactness family


def _bump_profile(n: int) -> PiecewiseRadial:
    """``((r-2)(3-r))**4`` on ``[2, 3]``, zero elsewhere."""
    base = Polynomial.fromroots([2.0, 3.0]) * -1.0
    poly = base**4
    d1, d2 = poly.deriv(), poly.deriv(2)

    def lap(x):
        r = np.exp(x)
        return d2(r) + (n - 1.0) * d1(r) / r

    pieces = [
        Piece(-math.inf, math.log(2.0), _zero, _zero, _zero, _minus_inf),
        Piece(
            math.log(2.0),
            math.log(3.0),
            lambda x: poly(np.exp(x)),
            lambda x: d1(np.exp(x)),
            lap,
            lambda x: _log_abs(lap(x)),
        ),
    ]
    return PiecewiseRadial(n, pieces, "bump")


def _e_norm(profile: PiecewiseRadial, p: float) -> float:
    norm = profile.lap_norm_fn
    half = norm(profile.n / 2.0) ** (profile.n / 2.0)
    return (half + norm(p) ** (profile.n / 2.0)) ** (2.0 / profile.n)


def cc_sharpness_family(
    k: Optional[float] = None,
    delta: float = 0.5,
    n: int = 4,
    p: float = 1.5,
    *,
    log_k: Optional[float] = None,
) -> tuple[PiecewiseRadial, PiecewiseRadial]:
    """Weak-limit witness ``u`` (norm ``delta``) and the normalized ``u_k``.

    ``u_k = (u + (1-delta**(n/2))**(2/n) xi_k) / ||u + ...||``; the bump ``u``
    lives on ``2 < r < 3`` while ``xi_k`` vanishes beyond ``r = 2``.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    bump = _bump_profile(n)
    u = bump * (delta / _e_norm(bump, p))
    u.label = "u"
    xi = moser_adams_xi(k, n, log_k=log_k)
    v = (xi * (1.0 - delta ** (n / 2.0)) ** (2.0 / n)).disjoint_sum(u)
    size = _e_norm(v, p)
    u_k = v / size
    u_k.label = "u_k"
    u_k.params = {"log_k": xi.params["log_k"], "delta": delta, "v_norm": size}
    return u, u_k
