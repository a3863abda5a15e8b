"""Inviscid Burgers equation ∂t u + ∂x(u²/2) = 0 on a periodic domain."""

from __future__ import annotations

import numpy as np

from .base import FourierModelBase


def burgers_flux(u: np.ndarray) -> np.ndarray:
    """Nodal flux u²/2."""
    return 0.5 * np.asarray(u) ** 2


class BurgersModel(FourierModelBase):
    names = ("u",)

    def rhs(self, state: np.ndarray) -> np.ndarray:
        # Mask before the nodal product and mask the transformed tendency:
        # together these reproduce exact Galerkin truncation on an odd grid.
        coeffs = self.masked(state)
        u = self.grid.backward(coeffs)
        flux_hat = self.grid.forward(burgers_flux(u))
        out = -self.grid.derivative_coeffs(flux_hat)
        return self.masked(out)

    def max_wavespeed(self, state: np.ndarray) -> float:
        return float(np.max(np.abs(self.grid.backward(state))))
