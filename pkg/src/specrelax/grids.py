"""Collocation grids and spectral transforms.

Two bases are supported:

* ``FourierGrid`` — uniform periodic grid with an odd number of points
  ``2N + 1``, so every retained wavenumber ``|k| <= N`` is a full complex
  mode (no lone Nyquist mode).  Real fields are stored as half spectra
  ``k = 0..N`` via ``numpy.fft.rfft``; the forward transform carries the
  ``1/(2N+1)`` normalization so that ``coeffs[k]`` is the amplitude of
  ``exp(2πi k x / L)``.
* ``ChebyshevGrid`` — Chebyshev extrema (Gauss–Lobatto) nodes, optionally
  stretched by the Kosloff–Tal-Ezer arcsine map to relax the ``O(1/N²)``
  edge clustering, then affinely rescaled to the physical interval.
  Transforms are type-I DCTs with endpoint half-weighting.

Both grids expose ``forward``/``backward``/``derivative`` plus the
Fourier-only helpers ``dealias`` (2/3 rule) and ``hilbert``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft


class BasisError(TypeError):
    """An operation was applied to a grid of the wrong basis."""


class ConsistencyError(ValueError):
    """Numerical consistency violated (e.g. complex residue in a real field)."""


class FourierGrid:
    """Uniform periodic collocation grid with ``2N + 1`` points.

    Parameters
    ----------
    num_points : int
        Odd number of collocation points ``2N + 1``.
    domain : (float, float)
        Physical interval ``[a, b)``; the period is ``L = b − a``.
    """

    basis = "fourier"

    def __init__(self, num_points: int, domain: tuple[float, float] = (0.0, 1.0)):
        num_points = int(num_points)
        if num_points < 3 or num_points % 2 == 0:
            raise ValueError(f"Fourier grid needs an odd point count >= 3, got {num_points}")
        a, b = float(domain[0]), float(domain[1])
        if not b > a:
            raise ValueError("domain_end must exceed domain_start")
        self.num_points = num_points
        self.n_modes = (num_points - 1) // 2  # bandwidth N
        self.domain = (a, b)
        self.length = b - a
        self.dx = self.length / num_points
        self.x = a + np.arange(num_points) * self.dx
        # Integer mode indices k = 0..N of the half spectrum, and physical wavenumbers.
        self.k = np.arange(self.n_modes + 1)
        self.wavenumbers = (2.0 * np.pi / self.length) * self.k
        self.dealias_cutoff = (2 * self.n_modes) // 3
        self._dealias_mask = (self.k <= self.dealias_cutoff).astype(float)
        self._ik = 1j * self.wavenumbers
        # Hilbert multiplier −i·sgn(k) on the half spectrum (k >= 0).
        self._hilbert = np.where(self.k > 0, -1j, 0.0)

    @property
    def min_spacing(self) -> float:
        return self.dx

    @property
    def quadrature_weights(self) -> np.ndarray:
        """Uniform weights Δx for discrete integrals Σ w_j f(x_j)."""
        return np.full(self.num_points, self.dx)

    def forward(self, nodal: np.ndarray) -> np.ndarray:
        """Nodal values -> half-spectrum coefficients û(k), k = 0..N.

        û(k) = (1/(2N+1)) Σ_j u(x_j) e^{−i(2π/L)k x_j}.  Negative modes are
        implied by conjugate symmetry (real input).
        """
        return np.fft.rfft(nodal) / self.num_points

    def backward(self, coeffs: np.ndarray) -> np.ndarray:
        """Half-spectrum coefficients -> nodal values (no extra factor).

        Raises
        ------
        ConsistencyError
            If the mean mode carries an imaginary part above 1e−9 relative —
            such input cannot come from a real field.
        """
        scale = max(float(np.max(np.abs(coeffs))), 1.0)
        if float(np.max(np.abs(np.imag(np.asarray(coeffs)[..., 0])))) > 1e-9 * scale:
            raise ConsistencyError("mean Fourier mode has a non-negligible imaginary part")
        return np.fft.irfft(coeffs, n=self.num_points) * self.num_points

    def derivative_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Differentiate in spectral space: û(k) -> i(2π/L)k û(k)."""
        return coeffs * self._ik

    def derivative(self, nodal: np.ndarray) -> np.ndarray:
        return self.backward(self.derivative_coeffs(self.forward(nodal)))

    def dealias(self, coeffs: np.ndarray) -> np.ndarray:
        """Zero all modes with |k| > floor(2N/3) (2/3 rule). Idempotent."""
        return coeffs * self._dealias_mask

    @property
    def dealias_mask(self) -> np.ndarray:
        return self._dealias_mask

    def hilbert_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Hilbert transform in spectral space, multiplier −i·sgn(k)."""
        return coeffs * self._hilbert

    def hilbert(self, nodal: np.ndarray) -> np.ndarray:
        return self.backward(self.hilbert_coeffs(self.forward(nodal)))

    def power_spectrum(self, coeffs: np.ndarray) -> np.ndarray:
        """|û(k)|² over k = 0..N."""
        return np.abs(coeffs) ** 2

    def __repr__(self):
        return f"FourierGrid(num_points={self.num_points}, domain={self.domain})"


class ChebyshevGrid:
    """Chebyshev-extrema grid with the Kosloff–Tal-Ezer arcsine stretching.

    Nodes are built from the reference extrema ``X_j = cos(πj/N)`` (descending,
    ``j = 0..N``), mapped through ``χ = asin(β X)/asin(β)`` and rescaled to the
    physical interval.  Both endpoints are reproduced exactly.  Coefficients
    are standard Chebyshev coefficients in the reference coordinate; the
    derivative composes the coefficient recurrence with the chain-rule factors
    of the two maps, evaluated per node.

    Parameters
    ----------
    num_points : int
        Number of collocation points ``N + 1`` (polynomial degree ``N``).
    domain : (float, float)
        Physical interval ``[a, b]``.
    kosloff_beta : float
        Map parameter strictly inside ``(0, 1)``.  Values near 1 make the node
        spacing nearly uniform.
    """

    basis = "chebyshev"

    def __init__(self, num_points: int, domain: tuple[float, float] = (0.0, 1.0),
                 kosloff_beta: float = 0.999):
        num_points = int(num_points)
        if num_points < 3:
            raise ValueError(f"Chebyshev grid needs at least 3 points, got {num_points}")
        beta = float(kosloff_beta)
        if not 0.0 < beta < 1.0:
            raise ValueError(f"kosloff_beta must lie strictly inside (0, 1), got {beta}")
        a, b = float(domain[0]), float(domain[1])
        if not b > a:
            raise ValueError("domain_end must exceed domain_start")
        self.num_points = num_points
        self.n_modes = num_points - 1  # polynomial degree N
        self.domain = (a, b)
        self.length = b - a
        self.kosloff_beta = beta
        N = self.n_modes
        j = np.arange(N + 1)
        self.X = np.cos(np.pi * j / N)  # reference extrema, descending 1 -> −1
        asb = np.arcsin(beta)
        chi = np.arcsin(beta * self.X) / asb
        # Exact endpoints: arcsin(±β)/arcsin(β) = ±1 up to rounding; pin them.
        chi[0], chi[-1] = 1.0, -1.0
        self.x = a + 0.5 * (b - a) * (chi + 1.0)
        self.k = np.arange(N + 1)
        # dX/dx at the nodes: d(chi)/dX = β / (asin(β) √(1−β²X²)),
        # dx/dchi = (b−a)/2, so du/dx = du/dX · (2/(b−a)) · asin(β)√(1−β²X²)/β.
        self._dX_dx = (2.0 / (b - a)) * asb * np.sqrt(1.0 - (beta * self.X) ** 2) / beta
        self._min_spacing = float(np.min(np.abs(np.diff(self.x))))

    @property
    def min_spacing(self) -> float:
        return self._min_spacing

    @property
    def quadrature_weights(self) -> np.ndarray:
        """Trapezoid weights on the mapped (non-uniform, descending) nodes."""
        gaps = np.abs(np.diff(self.x))
        w = np.empty(self.num_points)
        w[0] = 0.5 * gaps[0]
        w[-1] = 0.5 * gaps[-1]
        w[1:-1] = 0.5 * (gaps[:-1] + gaps[1:])
        return w

    def forward(self, nodal: np.ndarray) -> np.ndarray:
        """Nodal values at the extrema -> Chebyshev coefficients a_0..a_N.

        Realized as a type-I DCT with endpoint half-weighting:
        u(X_j) = Σ_k a_k T_k(X_j).
        """
        N = self.n_modes
        y = scipy.fft.dct(nodal, type=1, axis=-1)
        a = y / N
        a[..., 0] *= 0.5
        a[..., -1] *= 0.5
        return a

    def backward(self, coeffs: np.ndarray) -> np.ndarray:
        """Chebyshev coefficients -> nodal values at the extrema."""
        c = np.array(coeffs, dtype=float, copy=True)
        c[..., 1:-1] *= 0.5
        return scipy.fft.dct(c, type=1, axis=-1)

    def derivative_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients of du/dX in the reference coordinate (length N+1, top zero).

        Uses the closed form of the Chebyshev derivative recurrence,
        b_k = (2/c_k) Σ_{p>k, p+k odd} p a_p with c_0 = 2, as two
        parity-split suffix sums (vectorized; avoids a Python loop over
        degrees).
        """
        a = np.asarray(coeffs, dtype=float)
        n = a.shape[-1]
        w = a * np.arange(n)
        out = np.zeros_like(a)
        # Suffix sums of p·a_p over each parity class.
        suff_odd = np.flip(np.cumsum(np.flip(w[..., 1::2], -1), -1), -1)
        suff_even = np.flip(np.cumsum(np.flip(w[..., 0::2], -1), -1), -1)
        # Even k = 2i needs odd p ≥ k+1, i.e. the odd suffix starting at j = i.
        n_even = out[..., 0::2].shape[-1]
        out[..., 0:2 * suff_odd.shape[-1]:2] = 2.0 * suff_odd[..., :n_even]
        # Odd k = 2i+1 needs even p ≥ k+1, i.e. the even suffix starting at j = i+1.
        tail = suff_even[..., 1:]
        out[..., 1:2 * tail.shape[-1] + 1:2] = 2.0 * tail
        out[..., 0] *= 0.5
        return out

    def derivative(self, nodal: np.ndarray) -> np.ndarray:
        """Physical-space derivative at the mapped nodes (chain rule applied)."""
        du_dX = self.backward(self.derivative_coeffs(self.forward(nodal)))
        return du_dX * self._dX_dx

    def derivative_from_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        return self.backward(self.derivative_coeffs(coeffs)) * self._dX_dx

    def __repr__(self):
        return (f"ChebyshevGrid(num_points={self.num_points}, domain={self.domain}, "
                f"kosloff_beta={self.kosloff_beta})")


def make_grid(basis: str, num_points: int, domain: tuple[float, float],
              kosloff_beta: float = 0.999):
    """Factory used by config loading: basis is 'fourier' or 'chebyshev'."""
    if basis == "fourier":
        return FourierGrid(num_points, domain)
    if basis == "chebyshev":
        return ChebyshevGrid(num_points, domain, kosloff_beta)
    raise ValueError(f"unknown basis {basis!r}")


@dataclass
class SpectralField:
    """A scalar field with synchronized nodal and spectral representations.

    Exactly one representation may be supplied at construction; the other is
    computed lazily and cached.  Mutating either array invalidates nothing —
    treat instances as immutable values.
    """

    grid: FourierGrid | ChebyshevGrid
    _nodal: np.ndarray | None = None
    _coeffs: np.ndarray | None = None

    @classmethod
    def from_nodal(cls, grid, nodal: np.ndarray) -> "SpectralField":
        nodal = np.asarray(nodal, dtype=float)
        if nodal.shape != (grid.num_points,):
            raise ValueError(f"expected {grid.num_points} nodal values, got {nodal.shape}")
        return cls(grid, _nodal=nodal)

    @classmethod
    def from_coeffs(cls, grid, coeffs: np.ndarray) -> "SpectralField":
        coeffs = np.asarray(coeffs)
        return cls(grid, _coeffs=coeffs)

    @property
    def nodal(self) -> np.ndarray:
        if self._nodal is None:
            self._nodal = self.grid.backward(self._coeffs)
        return self._nodal

    @property
    def coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = self.grid.forward(self._nodal)
        return self._coeffs

    def derivative(self) -> "SpectralField":
        if isinstance(self.grid, FourierGrid):
            return SpectralField.from_coeffs(self.grid, self.grid.derivative_coeffs(self.coeffs))
        return SpectralField.from_nodal(self.grid, self.grid.derivative_from_coeffs(self.coeffs))

    def hilbert(self) -> "SpectralField":
        if not isinstance(self.grid, FourierGrid):
            raise BasisError("Hilbert transform requires a periodic Fourier grid")
        return SpectralField.from_coeffs(self.grid, self.grid.hilbert_coeffs(self.coeffs))

    def dealias(self) -> "SpectralField":
        if not isinstance(self.grid, FourierGrid):
            raise BasisError("2/3 dealiasing applies to Fourier grids")
        return SpectralField.from_coeffs(self.grid, self.grid.dealias(self.coeffs))
