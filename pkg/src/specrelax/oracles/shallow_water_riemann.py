"""Exact Riemann solution for the shallow-water dam-break problem.

Both initial states are at rest with h_l > h_r >= 0, which produces a left
rarefaction and (for wet right beds) a right shock.  The star depth is the
root of the usual depth function

    phi(h) = f_L(h) + f_R(h),   f_K = rarefaction or bore connector,

bracketed by (h_r, h_l).  The dry-bed case h_r = 0 degenerates to a single
rarefaction whose front moves at u_l + 2*sqrt(g*h_l).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import OracleError


def _f_connector(h: float, h_k: float, g: float) -> float:
    """Velocity jump across the wave connecting depth h_k to depth h."""
    if h <= h_k:  # rarefaction
        return 2.0 * (np.sqrt(g * h) - np.sqrt(g * h_k))
    return (h - h_k) * np.sqrt(0.5 * g * (h + h_k) / (h * h_k))


@dataclass(frozen=True)
class ShallowWaterRiemannSolution:
    """Dam-break solution sampler; ``sample(xi)`` returns (h, u) at xi = x/t."""

    g: float
    h_left: float
    h_right: float
    h_star: float
    u_star: float
    shock_speed: float        # nan for dry-bed releases

    @property
    def dry_bed(self) -> bool:
        return self.h_right == 0.0

    def sample(self, xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        g = self.g
        a_l = np.sqrt(g * self.h_left)
        h = np.empty_like(xi)
        u = np.empty_like(xi)

        if self.dry_bed:
            front = 2.0 * a_l
            still = xi <= -a_l
            fan = (xi > -a_l) & (xi < front)
            dry = xi >= front
            h[still], u[still] = self.h_left, 0.0
            u[fan] = (2.0 * a_l + 2.0 * xi[fan]) / 3.0
            a = (2.0 * a_l - xi[fan]) / 3.0
            h[fan] = a * a / g
            h[dry], u[dry] = 0.0, 0.0
            return h, u

        a_star = np.sqrt(g * self.h_star)
        head = -a_l
        tail = self.u_star - a_star
        still = xi <= head
        fan = (xi > head) & (xi < tail)
        star = (xi >= tail) & (xi < self.shock_speed)
        ahead = xi >= self.shock_speed
        h[still], u[still] = self.h_left, 0.0
        u[fan] = (2.0 * a_l + 2.0 * xi[fan]) / 3.0
        a = (2.0 * a_l - xi[fan]) / 3.0
        h[fan] = a * a / g
        h[star], u[star] = self.h_star, self.u_star
        h[ahead], u[ahead] = self.h_right, 0.0
        return h, u

    def sample_at(self, x, t: float, x0: float = 0.0):
        """Sample on physical points ``x`` at time t > 0, dam located at ``x0``."""
        if t <= 0.0:
            raise ValueError("sampling requires t > 0; at t=0 use the raw states")
        x = np.asarray(x, dtype=float)
        return self.sample((x - x0) / t)


def solve_dam_break(h_left: float, h_right: float,
                    g: float = 1.0) -> ShallowWaterRiemannSolution:
    """Solve the dam-break Riemann problem (both sides initially at rest)."""
    h_l, h_r = float(h_left), float(h_right)
    if h_l <= 0.0 or h_r < 0.0 or g <= 0.0:
        raise OracleError("dam break needs h_left > 0, h_right >= 0, g > 0")
    if h_l <= h_r:
        raise OracleError("dam break orientation requires h_left > h_right")

    if h_r == 0.0:
        return ShallowWaterRiemannSolution(
            g=g, h_left=h_l, h_right=0.0, h_star=0.0,
            u_star=2.0 * np.sqrt(g * h_l), shock_speed=float("nan"))

    def phi(h: float) -> float:
        return _f_connector(h, h_l, g) + _f_connector(h, h_r, g)

    # phi(h_r) = f_L(h_r) < 0 < f_R(h_l) = phi(h_l): root strictly inside.
    h_star = brentq(phi, h_r, h_l, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    u_star = -_f_connector(h_star, h_l, g)
    shock_speed = h_star * u_star / (h_star - h_r)
    return ShallowWaterRiemannSolution(
        g=g, h_left=h_l, h_right=h_r, h_star=float(h_star),
        u_star=float(u_star), shock_speed=float(shock_speed))


def shallow_water_riemann(h_left: float, h_right: float, g: float, xi):
    """One-call interface: solve the dam break and sample at ``xi`` = x/t."""
    return solve_dam_break(h_left, h_right, g).sample(xi)
