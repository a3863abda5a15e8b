"""Exact entropic solution of the inviscid Burgers equation for sinusoidal data.

Two initial conditions are supported on the periodic unit interval:

* ``ic0``: u0(x) = sin(2*pi*x).  Characteristics first cross at
  t_star = 1/(2*pi); afterwards the entropic weak solution carries a single
  stationary shock at x = 1/2 (odd symmetry of u0 about that point).
* ``ic1``: u0(x) = sin(2*pi*x - pi/2).  This is ``ic0`` translated by a
  quarter period, so the solution is obtained by the same shift and the
  shock sits at x = 3/4.

Pre-shock values solve the implicit characteristic equation
xi + t*u0(xi) = x by Newton's method; post-shock values pick the entropic
characteristic branch on the correct side of the shock.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import OracleError

TWO_PI = 2.0 * np.pi

#: Singularity time of the sinusoidal initial data.
T_STAR = 1.0 / TWO_PI

_NEWTON_TOL = 1e-14
_NEWTON_MAX_ITER = 100


def _newton_pre_shock(x: np.ndarray, t: float) -> np.ndarray:
    """Solve xi + t*sin(2*pi*xi) = x for each entry of x (t < T_STAR).

    Newton iteration started at xi = x; stragglers fall back to bisection
    on [x - t, x + t], which brackets the root because |u0| <= 1.
    """
    xi = x.copy()
    active = np.ones(x.shape, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        g = xi + t * np.sin(TWO_PI * xi) - x
        gp = 1.0 + TWO_PI * t * np.cos(TWO_PI * xi)
        step = np.where(active, g / gp, 0.0)
        xi = xi - step
        active &= np.abs(step) > _NEWTON_TOL
        if not active.any():
            return xi

    # Bisection rescue for entries Newton failed to settle.
    idx = np.nonzero(active)[0]
    lo, hi = x[idx] - t, x[idx] + t
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = mid + t * np.sin(TWO_PI * mid) - x[idx]
        hi = np.where(gm > 0.0, mid, hi)
        lo = np.where(gm > 0.0, lo, mid)
    xi[idx] = 0.5 * (lo + hi)
    g = xi[idx] + t * np.sin(TWO_PI * xi[idx]) - x[idx]
    if np.any(np.abs(g) > 1e-12):
        raise OracleError(
            "characteristic root find failed pre-shock "
            f"(worst residual {np.max(np.abs(g)):.3e})")
    return xi


def _post_shock_branch(s: np.ndarray, t: float) -> np.ndarray:
    """Entropic characteristic foot eta for points at distance s > 0 right of
    the shock, i.e. the root of G(eta) = eta - t*sin(2*pi*eta) = s.

    G decreases from 0 near eta = 0 (characteristics that have fallen into
    the shock) and is increasing on [eta_c, 1/2]; the entropic branch is the
    unique root in that monotone interval.
    """
    cos_c = min(1.0, 1.0 / (TWO_PI * t))
    eta_c = np.arccos(cos_c) / TWO_PI
    lo = np.full(s.shape, eta_c)
    hi = np.full(s.shape, 0.5)
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        gm = mid - t * np.sin(TWO_PI * mid) - s
        hi = np.where(gm > 0.0, mid, hi)
        lo = np.where(gm > 0.0, lo, mid)
    eta = 0.5 * (lo + hi)
    # Newton polish; G' >= 0 on the bracket, guard against division blowups.
    for _ in range(4):
        g = eta - t * np.sin(TWO_PI * eta) - s
        gp = 1.0 - TWO_PI * t * np.cos(TWO_PI * eta)
        eta = eta - np.where(gp > 1e-10, g / np.maximum(gp, 1e-10), 0.0)
    g = eta - t * np.sin(TWO_PI * eta) - s
    if np.any(np.abs(g) > 1e-12):
        raise OracleError(
            "characteristic root find failed post-shock "
            f"(worst residual {np.max(np.abs(g)):.3e})")
    return eta


def _exact_ic0(x: np.ndarray, t: float) -> np.ndarray:
    if t < T_STAR:
        xi = _newton_pre_shock(x, t)
        return np.sin(TWO_PI * xi)
    # Reduce to the half-cell right of the shock using the odd symmetry
    # u(1/2 + s) = -u(1/2 - s) and periodicity.
    y = np.mod(x - 0.5 + 0.5, 1.0) - 0.5      # x - 1/2 wrapped to [-1/2, 1/2)
    s = np.abs(y)
    u = np.zeros_like(y)
    inner = s > 0.0
    if inner.any():
        eta = _post_shock_branch(s[inner], t)
        u[inner] = -np.sign(y[inner]) * np.sin(TWO_PI * eta)
    return u


@dataclass(frozen=True)
class ExactBurgers:
    """Sampler for the exact entropic Burgers solution.

    Parameters
    ----------
    ic : str
        ``"ic0"`` for sin(2*pi*x) or ``"ic1"`` for sin(2*pi*x - pi/2).
    """

    ic: str = "ic0"

    def __post_init__(self):
        if self.ic not in ("ic0", "ic1"):
            raise ValueError(f"unknown Burgers initial condition {self.ic!r}")

    @property
    def t_star(self) -> float:
        return T_STAR

    @property
    def shock_position(self) -> float:
        return 0.5 if self.ic == "ic0" else 0.75

    def initial(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        shift = 0.0 if self.ic == "ic0" else 0.25
        return np.sin(TWO_PI * (x - shift))

    def __call__(self, x, t: float) -> np.ndarray:
        if t < 0.0:
            raise ValueError("t must be non-negative")
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x).astype(float)
        if self.ic == "ic1":
            xf = xf - 0.25
        u = _exact_ic0(xf, t)
        return float(u[0]) if scalar else u


def exact_burgers(x, t: float, ic: str = "ic0") -> np.ndarray:
    """Evaluate the exact entropic Burgers solution at points ``x``, time ``t``."""
    return ExactBurgers(ic)(x, t)


def exact_burgers_energy(t: float, ic: str = "ic0", samples: int = 8192) -> float:
    """Discrete ||u||^2 on a dense uniform grid (midpoint rule on the period)."""
    x = (np.arange(samples) + 0.5) / samples
    u = exact_burgers(x, t, ic)
    return float(np.sum(u * u) / samples)
