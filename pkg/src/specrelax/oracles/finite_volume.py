"""First-order finite-volume reference solver (Rusanov flux, forward Euler).

Monotone and entropy-satisfying at first order; used as the fallback
reference for problems with no closed-form solution (Shu-Osher, blast
waves, the shallow-water hump).  Deliberately independent of the spectral
modules so the two solver families can cross-validate each other.

State layout is a (ncomp, cells) array of cell averages with the same
component ordering as the spectral models:

* ``burgers``        -> (u,)
* ``shallow-water``  -> (h, hu)
* ``euler``          -> (rho, E, rho*u)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import OracleError

_BC_KINDS = ("periodic", "outflow", "reflect", "inflow")


def _burgers_flux(q, params):
    return 0.5 * q * q


def _burgers_speed(q, params):
    return np.abs(q[0])


def _sw_flux(q, params):
    g = params["g"]
    h, hu = q
    if np.any(h <= 0.0):
        raise OracleError("finite-volume reference lost depth positivity")
    u = hu / h
    return np.stack([hu, hu * u + 0.5 * g * h * h])


def _sw_speed(q, params):
    g = params["g"]
    h, hu = q
    return np.abs(hu / h) + np.sqrt(g * h)


def _euler_primitives(q, gamma):
    rho, energy, mom = q
    if np.any(rho <= 0.0):
        raise OracleError("finite-volume reference lost density positivity")
    u = mom / rho
    p = (gamma - 1.0) * (energy - 0.5 * mom * u)
    if np.any(p <= 0.0):
        raise OracleError("finite-volume reference lost pressure positivity")
    return u, p


def _euler_flux(q, params):
    gamma = params["gamma"]
    rho, energy, mom = q
    u, p = _euler_primitives(q, gamma)
    return np.stack([mom, u * (energy + p), mom * u + p])


def _euler_speed(q, params):
    gamma = params["gamma"]
    rho, energy, mom = q
    u, p = _euler_primitives(q, gamma)
    return np.abs(u) + np.sqrt(gamma * p / rho)


_MODELS: dict[str, dict] = {
    "burgers": {"ncomp": 1, "flux": _burgers_flux, "speed": _burgers_speed,
                "momentum_index": 0},
    "shallow-water": {"ncomp": 2, "flux": _sw_flux, "speed": _sw_speed,
                      "momentum_index": 1},
    "euler": {"ncomp": 3, "flux": _euler_flux, "speed": _euler_speed,
              "momentum_index": 2},
}


@dataclass
class FVSolution:
    """Finite-volume solution snapshot: cell centers, cell averages, time."""

    model: str
    x: np.ndarray
    q: np.ndarray
    t: float
    steps: int


def _pad(q, bc_left, bc_right, frozen_left, frozen_right, mom_idx):
    """Attach one ghost cell on each side according to the BC kinds."""
    ncomp, cells = q.shape
    qg = np.empty((ncomp, cells + 2))
    qg[:, 1:-1] = q
    if bc_left == "periodic":
        qg[:, 0] = q[:, -1]
    elif bc_left == "outflow":
        qg[:, 0] = q[:, 0]
    elif bc_left == "reflect":
        qg[:, 0] = q[:, 0]
        qg[mom_idx, 0] = -q[mom_idx, 0]
    else:  # inflow
        qg[:, 0] = frozen_left
    if bc_right == "periodic":
        qg[:, -1] = q[:, 0]
    elif bc_right == "outflow":
        qg[:, -1] = q[:, -1]
    elif bc_right == "reflect":
        qg[:, -1] = q[:, -1]
        qg[mom_idx, -1] = -q[mom_idx, -1]
    else:
        qg[:, -1] = frozen_right
    return qg


def fv_reference(model: str, ic: Callable[[np.ndarray], np.ndarray],
                 cells: int, t_end: float, *,
                 domain: tuple[float, float],
                 bc="periodic", cfl: float = 0.45,
                 g: float = 1.0, gamma: float = 1.4,
                 max_steps: int = 20_000_000) -> FVSolution:
    """Advance cell averages of ``ic`` to ``t_end`` with the Rusanov scheme.

    Parameters
    ----------
    model : str
        One of ``burgers``, ``shallow-water``, ``euler``.
    ic : callable
        Maps an array of positions to a (ncomp, npts) array of initial
        values (conserved variables); sampled at cell centers.
    cells : int
        Number of finite-volume cells (>= 100 for reference quality).
    bc : str or (str, str)
        Boundary kinds from {periodic, outflow, reflect, inflow}; ``inflow``
        freezes the ghost cell at the initial boundary value.
    """
    if model not in _MODELS:
        raise OracleError(f"unknown finite-volume model {model!r}")
    if cells < 100:
        raise OracleError("reference runs need at least 100 cells")
    spec = _MODELS[model]
    params = {"g": g, "gamma": gamma}
    a, b = float(domain[0]), float(domain[1])
    dx = (b - a) / cells
    x = a + (np.arange(cells) + 0.5) * dx
    q = np.atleast_2d(np.asarray(ic(x), dtype=float)).copy()
    if q.shape != (spec["ncomp"], cells):
        raise OracleError(
            f"initial condition returned shape {q.shape}, "
            f"expected {(spec['ncomp'], cells)}")

    if isinstance(bc, str):
        bc_left = bc_right = bc
    else:
        bc_left, bc_right = bc
    for kind in (bc_left, bc_right):
        if kind not in _BC_KINDS:
            raise OracleError(f"unknown boundary kind {kind!r}")
    if (bc_left == "periodic") != (bc_right == "periodic"):
        raise OracleError("periodic boundaries must be used on both sides")

    frozen_left = q[:, 0].copy()
    frozen_right = q[:, -1].copy()
    flux, speed = spec["flux"], spec["speed"]
    mom_idx = spec["momentum_index"]

    t = 0.0
    steps = 0
    while t < t_end:
        smax = float(np.max(speed(q, params)))
        if not np.isfinite(smax):
            raise OracleError(f"finite-volume reference blew up at t={t:.6g}")
        dt = t_end - t if smax == 0.0 else min(cfl * dx / smax, t_end - t)
        qg = _pad(q, bc_left, bc_right, frozen_left, frozen_right, mom_idx)
        f = flux(qg, params)
        s = speed(qg, params)
        s_face = np.maximum(s[:-1], s[1:])
        f_face = 0.5 * (f[:, :-1] + f[:, 1:]) - 0.5 * s_face * (qg[:, 1:] - qg[:, :-1])
        q = q - (dt / dx) * (f_face[:, 1:] - f_face[:, :-1])
        t += dt
        steps += 1
        if steps >= max_steps:
            raise OracleError("finite-volume reference exceeded the step budget")
    return FVSolution(model=model, x=x, q=q, t=t, steps=steps)
