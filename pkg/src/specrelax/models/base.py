"""Shared machinery for models evolved as Fourier coefficient arrays.

A Fourier model's state is the complex half-spectrum, shaped
``(ncomp, n_modes + 1)``; all coefficient-space operators are diagonal
multiplications, and nodal values are synthesized only where a nonlinear
product (or an observer) needs them.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..grids import FourierGrid


class FourierModelBase:
    """Common state plumbing; subclasses implement ``rhs`` and ``max_wavespeed``."""

    names: tuple[str, ...] = ()

    def __init__(self, grid: FourierGrid, dealias: bool = False):
        if not isinstance(grid, FourierGrid):
            raise ConfigError(f"{type(self).__name__} requires a Fourier grid")
        self.grid = grid
        self.dealias = bool(dealias)
        self._mask = grid.dealias_mask if self.dealias else None

    @property
    def ncomp(self) -> int:
        return len(self.names)

    def state_from_nodal(self, nodal: np.ndarray) -> np.ndarray:
        nodal = np.atleast_2d(np.asarray(nodal, dtype=float))
        if nodal.shape != (self.ncomp, self.grid.num_points):
            raise ConfigError(
                f"initial data must have shape ({self.ncomp}, {self.grid.num_points}), "
                f"got {nodal.shape}")
        coeffs = self.grid.forward(nodal)
        if self._mask is not None:
            coeffs = coeffs * self._mask
        return coeffs

    # Diagonal coefficient-space operators act directly on the state.
    def coefficient_term(self, state: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
        return state * multiplier

    def apply_multiplier(self, state: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
        return state * multiplier

    def nodal_components(self, state: np.ndarray) -> np.ndarray:
        return self.grid.backward(state)

    def power_spectra(self, state: np.ndarray) -> np.ndarray:
        return np.abs(state) ** 2

    def energy(self, state: np.ndarray) -> np.ndarray:
        """Per-component ∫u² dx via Parseval (odd point count: no Nyquist mode)."""
        power = np.abs(state) ** 2
        return self.grid.length * (power[..., 0] + 2.0 * power[..., 1:].sum(axis=-1))

    def masked(self, state: np.ndarray) -> np.ndarray:
        """State with the 2/3-rule applied when this model dealizes, else unchanged."""
        if self._mask is None:
            return state
        return state * self._mask
