"""Compressible Euler equations (γ-law gas) on a mapped Chebyshev grid.

Conserved components (ρ, E, ρu) evolve nodally.  The tendency is built in
characteristic form so boundary conditions reduce to overriding the wave
amplitudes 𝓛ᵢ at the two edge nodes:

    λ₁ = u − c,  λ₂ = u,  λ₃ = u + c,          c = √(γp/ρ)
    𝓛₁ = λ₁(∂x p − ρc ∂x u)
    𝓛₂ = λ₂(c² ∂x ρ − ∂x p)
    𝓛₃ = λ₃(∂x p + ρc ∂x u)

    d₁ = (𝓛₂ + ½(𝓛₃ + 𝓛₁)) / c²
    d₂ = ½(𝓛₃ + 𝓛₁)
    d₃ = (𝓛₃ − 𝓛₁) / (2ρc)

    ∂t ρ    = −d₁
    ∂t E    = −(½u² d₁ + d₂/(γ−1) + ρu d₃)
    ∂t (ρu) = −(u d₁ + ρ d₃)

On smooth interior data this is algebraically identical to the conservative
flux divergence (see ``flux_divergence_rhs``); the sign in d₁ is fixed by
that identity — with the opposite sign, ∂t ρ = −d₁ would not reduce to mass
conservation ∂t ρ = −∂x(ρu).

Boundary overrides (descending node order: index 0 is the right edge,
index −1 the left edge):

* reflecting wall: 𝓛₂ = 0 and the incoming acoustic amplitude copies the
  outgoing one (left wall 𝓛₃ = 𝓛₁, right wall 𝓛₁ = 𝓛₃), which forces
  ∂t(ρu) = 0 at a wall where u = 0;
* supersonic inflow: every incoming amplitude is set to zero, freezing the
  boundary state;
* non-reflecting outflow: only the incoming acoustic amplitude is zeroed.

Every override is gated on the sign of the corresponding λ: an amplitude
that is actually outgoing is always kept from the interior formulas.

The relaxation term (when a scheme adds one through ``coefficient_term``)
acts on interior nodes only: the characteristic treatment owns the complete
boundary tendency, and a global mollification term there would re-inject
the incoming-wave content the boundary conditions removed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, PositivityError
from ..grids import ChebyshevGrid

BC_KINDS = ("wall", "inflow", "outflow")

_BC_ALIASES = {
    "reflecting-wall": "wall",
    "reflectingwall": "wall",
    "reflecting wall": "wall",
    "supersonic-inflow": "inflow",
    "supersonicinflow": "inflow",
    "supersonic inflow": "inflow",
    "non-reflecting-outflow": "outflow",
    "nonreflectingoutflow": "outflow",
    "non-reflecting outflow": "outflow",
}


def _canonical_bc(kind: str) -> str:
    key = str(kind).strip().lower()
    key = _BC_ALIASES.get(key, key)
    if key == "periodic":
        raise ConfigError(
            "periodic boundaries belong to the Fourier models; the characteristic "
            "compressible-flow model supports wall/inflow/outflow")
    if key not in BC_KINDS:
        raise ConfigError(f"unknown boundary kind {kind!r}; choose from {BC_KINDS}")
    return key


@dataclass(frozen=True)
class BoundaryDescriptor:
    """Boundary kinds for the two edges of a non-periodic domain."""

    left: str
    right: str

    def __post_init__(self):
        object.__setattr__(self, "left", _canonical_bc(self.left))
        object.__setattr__(self, "right", _canonical_bc(self.right))


class EulerModel:
    names = ("rho", "energy", "momentum")

    def __init__(self, grid: ChebyshevGrid, bc: BoundaryDescriptor | tuple[str, str],
                 gamma: float = 1.4, relax_interior_only: bool = True):
        if not isinstance(grid, ChebyshevGrid):
            raise ConfigError("the compressible-flow model requires a Chebyshev grid")
        if not isinstance(bc, BoundaryDescriptor):
            bc = BoundaryDescriptor(*bc)
        if not gamma > 1.0:
            raise ConfigError(f"gamma must exceed 1, got {gamma}")
        self.grid = grid
        self.bc = bc
        self.gamma = float(gamma)
        self.relax_interior_only = bool(relax_interior_only)
        # Node order is descending in x: index 0 = right edge, −1 = left edge.
        self._interior = np.ones(grid.num_points)
        self._interior[0] = 0.0
        self._interior[-1] = 0.0
        self._weights = grid.quadrature_weights

    @property
    def ncomp(self) -> int:
        return 3

    # -- state plumbing -----------------------------------------------------
    def state_from_nodal(self, nodal: np.ndarray) -> np.ndarray:
        q = np.asarray(nodal, dtype=float)
        if q.shape != (3, self.grid.num_points):
            raise ConfigError(
                f"initial data must have shape (3, {self.grid.num_points}), got {q.shape}")
        return np.array(q, copy=True)

    def coefficient_term(self, state: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
        out = self.grid.backward(multiplier * self.grid.forward(state))
        if self.relax_interior_only:
            out = out * self._interior
        return out

    def apply_multiplier(self, state: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
        return self.grid.backward(multiplier * self.grid.forward(state))

    def nodal_components(self, state: np.ndarray) -> np.ndarray:
        return state

    def power_spectra(self, state: np.ndarray) -> np.ndarray:
        return self.grid.forward(state) ** 2

    def energy(self, state: np.ndarray) -> np.ndarray:
        return (state * state) @ self._weights

    # -- physics ------------------------------------------------------------
    def _positivity(self, values: np.ndarray, field: str) -> None:
        idx = int(np.argmin(values))
        if not values[idx] > 0.0:
            x = float(self.grid.x[idx])
            raise PositivityError(
                f"{field} non-positive at x={x:.6g} (node {idx}): value={values[idx]:.6g}",
                t=float("nan"), step_index=-1, field=field,
                node_index=idx, x=x, value=float(values[idx]))

    def primitives(self, state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(ρ, u, p) with positivity enforcement on ρ and p."""
        rho, total_energy, momentum = state
        self._positivity(rho, "density")
        u = momentum / rho
        p = (self.gamma - 1.0) * (total_energy - 0.5 * momentum * u)
        self._positivity(p, "pressure")
        return rho, u, p

    def max_wavespeed(self, state: np.ndarray) -> float:
        rho, u, p = self.primitives(state)
        return float(np.max(np.abs(u) + np.sqrt(self.gamma * p / rho)))

    def rhs(self, state: np.ndarray) -> np.ndarray:
        rho, u, p = self.primitives(state)
        drho, dp, du = self.grid.derivative(np.stack([rho, p, u]))

        c2 = self.gamma * p / rho
        c = np.sqrt(c2)
        lam1 = u - c
        lam2 = u
        lam3 = u + c
        amp1 = lam1 * (dp - rho * c * du)
        amp2 = lam2 * (c2 * drho - dp)
        amp3 = lam3 * (dp + rho * c * du)

        right, left = 0, -1
        # Right edge: outgoing means λ > 0.
        kind = self.bc.right
        if kind == "wall":
            amp2[right] = 0.0
            amp1[right] = amp3[right]
        elif kind == "inflow":
            if not lam1[right] > 0.0:
                amp1[right] = 0.0
            if not lam2[right] > 0.0:
                amp2[right] = 0.0
            if not lam3[right] > 0.0:
                amp3[right] = 0.0
        else:  # outflow
            if not lam1[right] > 0.0:
                amp1[right] = 0.0

        # Left edge: outgoing means λ < 0.
        kind = self.bc.left
        if kind == "wall":
            amp2[left] = 0.0
            amp3[left] = amp1[left]
        elif kind == "inflow":
            if not lam1[left] < 0.0:
                amp1[left] = 0.0
            if not lam2[left] < 0.0:
                amp2[left] = 0.0
            if not lam3[left] < 0.0:
                amp3[left] = 0.0
        else:  # outflow
            if not lam3[left] < 0.0:
                amp3[left] = 0.0

        d1 = (amp2 + 0.5 * (amp3 + amp1)) / c2
        d2 = 0.5 * (amp3 + amp1)
        d3 = (amp3 - amp1) / (2.0 * rho * c)

        return -np.stack([
            d1,
            0.5 * u * u * d1 + d2 / (self.gamma - 1.0) + rho * u * d3,
            u * d1 + rho * d3,
        ])


def flux_divergence_rhs(model: EulerModel, state: np.ndarray) -> np.ndarray:
    """Conservative-form tendency −∂x(ρu, (E+p)u, ρu²+p); no boundary handling.

    Cross-validation partner for the characteristic form: the two agree to
    spectral accuracy on smooth data away from the boundaries.
    """
    rho, u, p = model.primitives(state)
    total_energy = state[1]
    momentum = state[2]
    fluxes = np.stack([momentum, (total_energy + p) * u, momentum * u + p])
    return -model.grid.derivative(fluxes)
