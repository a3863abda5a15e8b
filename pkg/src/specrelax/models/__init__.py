"""Physical systems and their named initial-value problems.

Each model couples a grid to a right-hand side; ``PROBLEMS`` maps the
built-in problem names (addressable from configs and the command line) to
domain, initial data, boundary kinds, parameters, and the default reference
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import ConfigError
from ..grids import ChebyshevGrid, FourierGrid, make_grid
from .base import FourierModelBase
from .burgers import BurgersModel, burgers_flux
from .euler import BC_KINDS, BoundaryDescriptor, EulerModel, flux_divergence_rhs
from .hl import HLModel
from .shallow_water import ShallowWaterModel, mirror_symmetrize

__all__ = [
    "BC_KINDS",
    "BoundaryDescriptor",
    "BurgersModel",
    "EulerModel",
    "FourierModelBase",
    "HLModel",
    "PROBLEMS",
    "ProblemSpec",
    "ShallowWaterModel",
    "burgers_flux",
    "flux_divergence_rhs",
    "make_model",
    "make_problem_grid",
    "mirror_symmetrize",
    "problem",
]

GAMMA_GAS = 1.4


@dataclass(frozen=True)
class ProblemSpec:
    """A named initial-value problem: model + domain + data + boundaries."""

    name: str
    model: str                   # burgers | shallow-water | euler | hl
    basis: str                   # fourier | chebyshev
    domain: tuple[float, float]
    ic: Callable[[np.ndarray], np.ndarray]
    bc: tuple[str, str] | None = None
    params: dict = field(default_factory=dict)
    reference: str | None = None
    description: str = ""

    def initial_state(self, model, grid) -> np.ndarray:
        return model.state_from_nodal(self.ic(grid.x))


def _conserved_gas(rho, u, p, gamma=GAMMA_GAS):
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    total_energy = p / (gamma - 1.0) + 0.5 * rho * u * u
    return np.stack([rho, total_energy, rho * u])


def _ic_burgers_0(x):
    return np.sin(2.0 * np.pi * x)[None, :]


def _ic_burgers_1(x):
    return np.sin(2.0 * np.pi * x - 0.5 * np.pi)[None, :]


def _ic_sw_hump(x, beta=5.0):
    h = 1.0 + 0.4 * np.exp(-beta * x**2)
    return np.stack([h, np.zeros_like(h)])


_DAM_H_LEFT, _DAM_H_RIGHT = 3.0, 1.0
_dam_h, _dam_u, _DAM_DOMAIN = mirror_symmetrize(
    lambda z: np.where(z < 0.0, _DAM_H_LEFT, _DAM_H_RIGHT),
    lambda z: np.zeros_like(z),
    (-5.0, 5.0),
)


def _ic_sw_dambreak(x):
    h = _dam_h(x)
    return np.stack([h, h * _dam_u(x)])


def _ic_euler_sod(x):
    left = x < 0.0
    rho = np.where(left, 1.0, 0.125)
    p = np.where(left, 1.0, 0.1)
    return _conserved_gas(rho, np.zeros_like(rho), p)


def _ic_euler_lax(x):
    # Conserved-variable data (ρ, E, ρu).
    left = x < 0.0
    rho = np.where(left, 0.445, 0.5)
    total_energy = np.where(left, 8.928, 1.4275)
    momentum = np.where(left, 0.311, 0.0)
    return np.stack([rho, total_energy, momentum])


def _ic_euler_shuosher(x):
    left = x <= -0.8
    rho = np.where(left, 3.85714, 1.0 + 0.2 * np.sin(5.0 * np.pi * x))
    u = np.where(left, 2.629369, 0.0)
    p = np.where(left, 10.33333, 1.0)
    return _conserved_gas(rho, u, p)


def _ic_euler_blast(x):
    p = np.where(x < 0.1, 1.0e3, np.where(x < 0.9, 1.0e-2, 1.0e2))
    rho = np.ones_like(p)
    return _conserved_gas(rho, np.zeros_like(p), p)


_HL_LENGTH = 1.0 / 6.0


def _ic_hl(x):
    u = 1.0e4 * np.sin(2.0 * np.pi * x / _HL_LENGTH) ** 2
    return np.stack([u, np.zeros_like(u)])


PROBLEMS: dict[str, ProblemSpec] = {
    spec.name: spec for spec in [
        ProblemSpec(
            name="burgers-ic0", model="burgers", basis="fourier", domain=(0.0, 1.0),
            ic=_ic_burgers_0, reference="exact-burgers:ic0",
            description="single-mode sine, shock at t* = 1/(2π)"),
        ProblemSpec(
            name="burgers-ic1", model="burgers", basis="fourier", domain=(0.0, 1.0),
            ic=_ic_burgers_1, reference="exact-burgers:ic1",
            description="quarter-period shifted sine (shock at x = 3/4)"),
        ProblemSpec(
            name="sw-hump", model="shallow-water", basis="fourier", domain=(-5.0, 5.0),
            ic=_ic_sw_hump, params={"g": 1.0, "hump_beta": 5.0},
            description="smooth water hump, shock forms near t = 3"),
        ProblemSpec(
            name="sw-dambreak", model="shallow-water", basis="fourier",
            domain=_DAM_DOMAIN,
            ic=_ic_sw_dambreak,
            params={"g": 1.0, "h_left": _DAM_H_LEFT, "h_right": _DAM_H_RIGHT,
                    "dam_x0": 0.0, "restriction": (-5.0, 5.0)},
            reference="shallow-water-riemann:dambreak",
            description="dam break mirrored about x = −5 onto a 20-periodic domain"),
        ProblemSpec(
            name="euler-sod", model="euler", basis="chebyshev", domain=(-1.0, 1.0),
            ic=_ic_euler_sod, bc=("wall", "wall"),
            params={"gamma": GAMMA_GAS, "diaphragm_x0": 0.0},
            reference="euler-riemann:sod",
            description="Sod shock tube between reflecting walls"),
        ProblemSpec(
            name="euler-lax", model="euler", basis="chebyshev", domain=(-1.0, 1.0),
            ic=_ic_euler_lax, bc=("wall", "wall"),
            params={"gamma": GAMMA_GAS, "diaphragm_x0": 0.0},
            reference="euler-riemann:lax",
            description="Lax shock tube (conserved-variable data) between walls"),
        ProblemSpec(
            name="euler-shuosher", model="euler", basis="chebyshev", domain=(-1.0, 1.0),
            ic=_ic_euler_shuosher, bc=("inflow", "outflow"),
            params={"gamma": GAMMA_GAS},
            description="Mach-3 shock hitting a sinusoidal entropy wave"),
        ProblemSpec(
            name="euler-blast", model="euler", basis="chebyshev", domain=(0.0, 1.0),
            ic=_ic_euler_blast, bc=("wall", "wall"),
            params={"gamma": GAMMA_GAS},
            description="two interacting blast waves between reflecting walls"),
        ProblemSpec(
            name="hl-default", model="hl", basis="fourier", domain=(0.0, _HL_LENGTH),
            ic=_ic_hl,
            description="wall-model squared sine, singularity near t = 0.0035"),
    ]
}


def problem(name: str) -> ProblemSpec:
    key = str(name).strip().lower()
    if key not in PROBLEMS:
        raise ConfigError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}")
    return PROBLEMS[key]


def make_problem_grid(spec: ProblemSpec, num_points: int, kosloff_beta: float = 0.999):
    """Grid matching the problem's basis and domain."""
    if spec.basis == "chebyshev":
        return make_grid("chebyshev", num_points, spec.domain, kosloff_beta=kosloff_beta)
    return make_grid("fourier", num_points, spec.domain)


def make_model(spec: ProblemSpec, grid, dealias: bool = False):
    """Instantiate the model named by a ProblemSpec on the given grid."""
    if spec.model == "burgers":
        return BurgersModel(grid, dealias=dealias)
    if spec.model == "shallow-water":
        return ShallowWaterModel(grid, dealias=dealias, g=spec.params.get("g", 1.0))
    if spec.model == "hl":
        return HLModel(grid, dealias=dealias)
    if spec.model == "euler":
        if dealias:
            raise ConfigError(
                "the 2/3 rule is a Fourier-basis operation; the compressible-flow "
                "model does not support dealias=true")
        return EulerModel(grid, bc=spec.bc, gamma=spec.params.get("gamma", GAMMA_GAS))
    raise ConfigError(f"unknown model {spec.model!r}")  # pragma: no cover
