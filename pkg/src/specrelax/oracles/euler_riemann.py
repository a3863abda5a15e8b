"""Exact Riemann solver for the 1D compressible Euler equations.

Implements the classical pressure-function formulation: the star-region
pressure is the root of f(p) = f_L(p) + f_R(p) + (u_R - u_L) where each
side contributes a shock branch (Rankine-Hugoniot) or a rarefaction branch
(isentropic relation).  The root is found by Newton iteration started from
the two-rarefaction approximation; the full wave fan can then be sampled
at any similarity coordinate xi = x/t.

States are primitive tuples (rho, u, p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import OracleError

_TOL = 1e-12
_MAX_ITER = 100


def _fk(p: float, rho_k: float, p_k: float, a_k: float, gamma: float):
    """Pressure function for one side and its derivative with respect to p."""
    if p > p_k:  # shock
        ak = 2.0 / ((gamma + 1.0) * rho_k)
        bk = (gamma - 1.0) / (gamma + 1.0) * p_k
        root = np.sqrt(ak / (bk + p))
        f = (p - p_k) * root
        fp = root * (1.0 - 0.5 * (p - p_k) / (bk + p))
    else:  # rarefaction
        z = (gamma - 1.0) / (2.0 * gamma)
        f = 2.0 * a_k / (gamma - 1.0) * ((p / p_k) ** z - 1.0)
        fp = (p / p_k) ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho_k * a_k)
    return f, fp


@dataclass(frozen=True)
class EulerRiemannSolution:
    """Solved Riemann problem; ``sample(xi)`` returns (rho, u, p) at xi = x/t."""

    gamma: float
    left: tuple[float, float, float]
    right: tuple[float, float, float]
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    left_wave: str            # "shock" or "rarefaction"
    right_wave: str

    @property
    def left_shock_speed(self) -> float:
        if self.left_wave != "shock":
            raise ValueError("left wave is not a shock")
        rho, u, p = self.left
        a = np.sqrt(self.gamma * p / rho)
        g = self.gamma
        return u - a * np.sqrt((g + 1.0) / (2.0 * g) * self.p_star / p
                               + (g - 1.0) / (2.0 * g))

    @property
    def right_shock_speed(self) -> float:
        if self.right_wave != "shock":
            raise ValueError("right wave is not a shock")
        rho, u, p = self.right
        a = np.sqrt(self.gamma * p / rho)
        g = self.gamma
        return u + a * np.sqrt((g + 1.0) / (2.0 * g) * self.p_star / p
                               + (g - 1.0) / (2.0 * g))

    def sample(self, xi):
        """Evaluate (rho, u, p) at similarity coordinates ``xi`` (vectorized)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        g = self.gamma
        rho_l, u_l, p_l = self.left
        rho_r, u_r, p_r = self.right
        a_l = np.sqrt(g * p_l / rho_l)
        a_r = np.sqrt(g * p_r / rho_r)
        rho = np.empty_like(xi)
        u = np.empty_like(xi)
        p = np.empty_like(xi)

        left_of_contact = xi <= self.u_star
        # --- left side of the contact ---
        if self.left_wave == "shock":
            s_l = self.left_shock_speed
            pre = left_of_contact & (xi <= s_l)
            post = left_of_contact & (xi > s_l)
            rho[pre], u[pre], p[pre] = rho_l, u_l, p_l
            rho[post], u[post], p[post] = self.rho_star_left, self.u_star, self.p_star
        else:
            a_star = a_l * (self.p_star / p_l) ** ((g - 1.0) / (2.0 * g))
            head = u_l - a_l
            tail = self.u_star - a_star
            pre = left_of_contact & (xi <= head)
            fan = left_of_contact & (xi > head) & (xi < tail)
            post = left_of_contact & (xi >= tail)
            rho[pre], u[pre], p[pre] = rho_l, u_l, p_l
            base = (2.0 + (g - 1.0) / a_l * (u_l - xi[fan])) / (g + 1.0)
            rho[fan] = rho_l * base ** (2.0 / (g - 1.0))
            u[fan] = (2.0 / (g + 1.0)) * (a_l + 0.5 * (g - 1.0) * u_l + xi[fan])
            p[fan] = p_l * base ** (2.0 * g / (g - 1.0))
            rho[post], u[post], p[post] = self.rho_star_left, self.u_star, self.p_star

        right_of_contact = ~left_of_contact
        # --- right side of the contact ---
        if self.right_wave == "shock":
            s_r = self.right_shock_speed
            post = right_of_contact & (xi < s_r)
            pre = right_of_contact & (xi >= s_r)
            rho[pre], u[pre], p[pre] = rho_r, u_r, p_r
            rho[post], u[post], p[post] = self.rho_star_right, self.u_star, self.p_star
        else:
            a_star = a_r * (self.p_star / p_r) ** ((g - 1.0) / (2.0 * g))
            head = u_r + a_r
            tail = self.u_star + a_star
            pre = right_of_contact & (xi >= head)
            fan = right_of_contact & (xi < head) & (xi > tail)
            post = right_of_contact & (xi <= tail)
            rho[pre], u[pre], p[pre] = rho_r, u_r, p_r
            base = (2.0 - (g - 1.0) / a_r * (u_r - xi[fan])) / (g + 1.0)
            rho[fan] = rho_r * base ** (2.0 / (g - 1.0))
            u[fan] = (2.0 / (g + 1.0)) * (-a_r + 0.5 * (g - 1.0) * u_r + xi[fan])
            p[fan] = p_r * base ** (2.0 * g / (g - 1.0))
            rho[post], u[post], p[post] = self.rho_star_right, self.u_star, self.p_star

        return rho, u, p

    def sample_at(self, x, t: float, x0: float = 0.0):
        """Sample on physical points ``x`` at time t > 0, diaphragm at ``x0``."""
        if t <= 0.0:
            raise ValueError("sampling requires t > 0; at t=0 use the raw states")
        x = np.asarray(x, dtype=float)
        return self.sample((x - x0) / t)


def solve_euler_riemann(left, right, gamma: float = 1.4) -> EulerRiemannSolution:
    """Solve the Riemann problem for primitive states (rho, u, p).

    Raises
    ------
    OracleError
        If the data generate vacuum or the pressure iteration fails.
    """
    rho_l, u_l, p_l = (float(v) for v in left)
    rho_r, u_r, p_r = (float(v) for v in right)
    if min(rho_l, rho_r, p_l, p_r) <= 0.0:
        raise OracleError("Riemann data require positive densities and pressures")
    a_l = np.sqrt(gamma * p_l / rho_l)
    a_r = np.sqrt(gamma * p_r / rho_r)
    if 2.0 * (a_l + a_r) / (gamma - 1.0) <= u_r - u_l:
        raise OracleError("initial states generate vacuum (pressure positivity fails)")

    # Two-rarefaction initial guess, floored away from zero.
    z = (gamma - 1.0) / (2.0 * gamma)
    num = a_l + a_r - 0.5 * (gamma - 1.0) * (u_r - u_l)
    den = a_l / p_l**z + a_r / p_r**z
    p = max((num / den) ** (1.0 / z), 1e-10 * min(p_l, p_r))

    for _ in range(_MAX_ITER):
        f_l, fp_l = _fk(p, rho_l, p_l, a_l, gamma)
        f_r, fp_r = _fk(p, rho_r, p_r, a_r, gamma)
        f = f_l + f_r + (u_r - u_l)
        dp = f / (fp_l + fp_r)
        p_new = p - dp
        if p_new <= 0.0:
            p_new = 0.5 * p  # damped step keeps the iterate positive
        if 2.0 * abs(p_new - p) / (p_new + p) < _TOL:
            p = p_new
            break
        p = p_new
    else:
        raise OracleError("pressure iteration did not converge")

    f_l, _ = _fk(p, rho_l, p_l, a_l, gamma)
    f_r, _ = _fk(p, rho_r, p_r, a_r, gamma)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)

    beta = (gamma - 1.0) / (gamma + 1.0)
    if p > p_l:
        left_wave = "shock"
        ratio = p / p_l
        rho_star_l = rho_l * (ratio + beta) / (beta * ratio + 1.0)
    else:
        left_wave = "rarefaction"
        rho_star_l = rho_l * (p / p_l) ** (1.0 / gamma)
    if p > p_r:
        right_wave = "shock"
        ratio = p / p_r
        rho_star_r = rho_r * (ratio + beta) / (beta * ratio + 1.0)
    else:
        right_wave = "rarefaction"
        rho_star_r = rho_r * (p / p_r) ** (1.0 / gamma)

    return EulerRiemannSolution(
        gamma=gamma, left=(rho_l, u_l, p_l), right=(rho_r, u_r, p_r),
        p_star=p, u_star=u_star,
        rho_star_left=rho_star_l, rho_star_right=rho_star_r,
        left_wave=left_wave, right_wave=right_wave)


def euler_riemann(left, right, gamma: float, xi):
    """One-call interface: solve and sample at similarity coordinates ``xi``."""
    return solve_euler_riemann(left, right, gamma).sample(xi)
