"""Truncated exponential Young function and the two-term power splitting constant."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = ["PhiOverflowError", "YoungParams", "log_phi", "phi", "split_constant"]

# Below this value of alpha*|s|**q the tail series is summed directly.
SERIES_SWITCH = 0.5
# Largest exponent whose exponential is representable as a double.
MAX_EXPONENT = math.log(np.finfo(float).max)


class PhiOverflowError(OverflowError):
    """Raised when exp(alpha |s|**q) leaves the double range."""

    def __init__(self, exponent: float):
        super().__init__(f"exponent {exponent:.6g} exceeds the double range ({MAX_EXPONENT:.2f})")
        self.exponent = exponent


@dataclass(frozen=True)
class YoungParams:
    alpha: float
    j0: int
    q_exp: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if int(self.j0) != self.j0 or self.j0 < 1:
            raise ValueError(f"j0 must be an integer >= 1, got {self.j0}")
        if not self.q_exp > 1:
            raise ValueError(f"q_exp must exceed 1, got {self.q_exp}")

    @classmethod
    def for_dimension(cls, alpha: float, j0: int, n: int) -> "YoungParams":
        return cls(alpha, j0, n / (n - 2.0))


def _tail_series(x: np.ndarray, j0: int) -> np.ndarray:
    """Sum of x**j / j! over j >= j0, for 0 <= x <= 1/2."""
    term = x**j0 / math.factorial(j0)
    total = term.copy()
    j = j0
    while True:
        j += 1
        term = term * x / j
        total += term
        if np.all(term <= 1e-17 * total):
            return total


def _exponent(s, params: YoungParams) -> np.ndarray:
    return params.alpha * np.abs(np.asarray(s, dtype=float)) ** params.q_exp


def _tail(x: np.ndarray, j0: int) -> np.ndarray:
    out = np.zeros_like(x)
    small = x < SERIES_SWITCH
    if np.any(small):
        out[small] = _tail_series(x[small], j0)
    big = ~small
    if np.any(big):
        # exp(x) times the regularized lower incomplete gamma P(j0, x) is
        # the same tail without subtracting nearly equal numbers
        out[big] = np.exp(x[big]) * special.gammainc(j0, x[big])
    return out


def phi(s, params: YoungParams):
    """``exp(alpha|s|^q) - sum_{j<j0} (alpha|s|^q)^j / j!``.

    Raises
    ------
    PhiOverflowError
        If ``alpha |s|**q`` is beyond the representable exponent range.
    """
    x = np.atleast_1d(_exponent(s, params))
    top = float(np.max(x)) if x.size else 0.0
    if top > MAX_EXPONENT:
        raise PhiOverflowError(top)
    out = _tail(x, params.j0)
    if np.ndim(s) == 0:
        return float(out[0])
    return out.reshape(np.shape(s))


def log_phi(s, params: YoungParams):
    """Natural log of ``phi``; ``-inf`` at ``s = 0``, never overflows."""
    x = np.atleast_1d(_exponent(s, params)).astype(float)
    out = np.full_like(x, -np.inf)
    small = (x > 0) & (x < SERIES_SWITCH)
    if np.any(small):
        out[small] = np.log(_tail_series(x[small], params.j0))
    big = x >= SERIES_SWITCH
    if np.any(big):
        out[big] = x[big] + np.log(special.gammainc(params.j0, x[big]))
    if np.ndim(s) == 0:
        return float(out[0])
    return out.reshape(np.shape(s))


def split_constant(eta: float, wp: float) -> float:
    """Constant ``C`` with ``(a+b)**wp <= (1+eta) a**wp + C b**wp`` for ``a, b >= 0``."""
    if not wp > 1:
        raise ValueError(f"exponent must exceed 1, got {wp}")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    inner = -math.expm1(-math.log1p(eta) / (wp - 1.0))
    return inner ** (1.0 - wp)
