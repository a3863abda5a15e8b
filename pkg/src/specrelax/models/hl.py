"""Wall model for axisymmetric incompressible flow (two coupled transport fields).

Periodic components (u, ω) with a nonlocal velocity closing the system:

    ∂t u = −v ∂x u
    ∂t ω = −v ∂x ω + ∂x u
    ∂x v = H(ω)            (Hilbert transform; Biot–Savart law)

The velocity is recovered spectrally: v̂(k) = Ĥ(ω)(k) / (i·(2π/L)k) for
k ≠ 0 with v̂(0) = 0 (zero-mean velocity fixes the integration constant).
"""

from __future__ import annotations

import numpy as np

from .base import FourierModelBase


class HLModel(FourierModelBase):
    names = ("u", "omega")

    def __init__(self, grid, dealias: bool = False):
        super().__init__(grid, dealias)
        inv_ik = np.zeros(grid.n_modes + 1, dtype=complex)
        inv_ik[1:] = 1.0 / (1j * grid.wavenumbers[1:])
        self._inv_ik = inv_ik

    def velocity_coeffs(self, omega_coeffs: np.ndarray) -> np.ndarray:
        """Invert ∂x v = H(ω) in spectral space with zero mean."""
        return self.grid.hilbert_coeffs(omega_coeffs) * self._inv_ik

    def rhs(self, state: np.ndarray) -> np.ndarray:
        coeffs = self.masked(state)
        cu, cw = coeffs[0], coeffs[1]
        v = self.grid.backward(self.velocity_coeffs(cw))
        du = self.grid.backward(self.grid.derivative_coeffs(cu))
        dw = self.grid.backward(self.grid.derivative_coeffs(cw))
        tend_u = self.grid.forward(-v * du)
        # The stretching term +∂x u is linear: add it in coefficient space.
        tend_w = self.grid.forward(-v * dw) + self.grid.derivative_coeffs(cu)
        return self.masked(np.stack([tend_u, tend_w]))

    def max_wavespeed(self, state: np.ndarray) -> float:
        v = self.grid.backward(self.velocity_coeffs(state[1]))
        return float(np.max(np.abs(v)))
