"""Spectral mollification kernels and the relaxation parameter law.

Every kernel is represented by its multiplier vector ``K̂(k)`` over
``k = 0..N`` (only ``|k|`` enters any formula, so the half spectrum is
enough for Fourier grids; for Chebyshev grids the same vector multiplies
coefficients by polynomial degree).

Families
--------
Positive kernels (nonnegative in real space, ``K̂(0) = 1`` exactly):

* ``feko``     — Fejér–Korovkin, support ``|k| <= m``
* ``jackson``  — Jackson, support ``|k| <= 2m − 2``
* ``jdlvp``    — Jackson–de La Vallée Poussin, support ``|k| <= 2m − 1``

Non-positive filters:

* ``dlvp``     — de La Vallée Poussin trapezoid: flat to ``n = r·N^γ``, linear
  ramp of width ``p = (1 − r)·N^γ``, zero beyond
* ``tt05``     — exponential filter of order ``p = N^γ``
* ``mmo78``    — flat to ``m`` then Gaussian-type rolloff ``exp(−ξ(|k|−m)^{2p})``
* ``rsk``      — Gaussian-regularized Shannon kernel (erf window)

The relaxation law couples one ``(α, γ)`` pair to a resolution ``N``:
bandwidth ``m = N^γ`` (kept as a real number — comparisons ``|k| <= m`` use
the real value) and timescale ``τ = N^{−α}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

FAMILIES = ("feko", "jackson", "jdlvp", "dlvp", "tt05", "mmo78", "rsk", "dirichlet")

_ALIASES = {
    "identity": "dirichlet",
    "fejer-korovkin": "feko",
    "fejerkorovkin": "feko",
    "jackson-dlvp": "jdlvp",
    "jacksondlvp": "jdlvp",
    "de-la-vallee-poussin": "dlvp",
    "delavalleepoussin": "dlvp",
}


class KernelParameterError(ValueError):
    """Invalid kernel family or parameter combination."""


def canonical_family(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise KernelParameterError(f"unknown kernel family {name!r}; choose from {FAMILIES}")
    return key


@dataclass(frozen=True)
class RelaxationParams:
    """Bandwidth/timescale pair from the (α, γ) law."""

    m: float
    tau: float


def relaxation_params(N: int, alpha: float, gamma: float) -> RelaxationParams:
    """m = N^γ (real-valued bandwidth), τ = N^{−α}.

    γ must lie strictly inside (0, 1).  α may be negative (the tt05 filter
    uses α < 0, giving τ > 1).
    """
    if N < 2:
        raise KernelParameterError(f"N must be >= 2, got {N}")
    if not 0.0 < gamma < 1.0:
        raise KernelParameterError(f"gamma must lie strictly inside (0, 1), got {gamma}")
    return RelaxationParams(m=float(N) ** gamma, tau=float(N) ** (-alpha))


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus its parameters.

    ``alpha``/``gamma`` feed the relaxation law; ``r`` is the dlvp plateau
    fraction or the rsk filter order; ``mmo_beta``/``mmo_p`` parameterize the
    mmo78 rolloff (ξ = 10^{−mmo_beta}, exponent 2·mmo_p).
    """

    family: str
    alpha: float
    gamma: float
    r: float = 0.5
    mmo_beta: float = 2.5
    mmo_p: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", canonical_family(self.family))
        if not 0.0 < self.gamma < 1.0:
            raise KernelParameterError(f"gamma must lie strictly inside (0, 1), got {self.gamma}")
        if self.family in ("dlvp", "rsk") and not 0.0 < self.r:
            raise KernelParameterError(f"r must be positive, got {self.r}")
        if self.family == "dlvp" and not self.r < 1.0:
            raise KernelParameterError(f"dlvp plateau fraction r must lie in (0, 1), got {self.r}")

    def params(self, N: int) -> RelaxationParams:
        return relaxation_params(N, self.alpha, self.gamma)


def _feko(k: np.ndarray, m: float) -> np.ndarray:
    if m + 2.0 <= 1.0:
        raise KernelParameterError(f"Fejér–Korovkin needs m + 2 > 1, got m = {m}")
    w = np.pi / (m + 2.0)
    vals = (1.0 - k / (m + 2.0)) * np.cos(k * w) + (1.0 / (m + 2.0)) / np.tan(w) * np.sin(k * w)
    return np.where(k <= m, vals, 0.0)


def _jackson(k: np.ndarray, m: float) -> np.ndarray:
    denom = 2.0 * m * (2.0 * m * m + 1.0)
    # The constant part of the low branch equals denom exactly; writing it as
    # 1 + (...)/denom keeps K(0) = 1 free of rounding.
    low = 1.0 + (3.0 * k**3 - 6.0 * m * k**2 - 3.0 * k) / denom
    high = (-(k**3) + 6.0 * m * k**2 - (12.0 * m * m - 1.0) * k + 8.0 * m**3 - 2.0 * m) / denom
    out = np.where(k <= m, low, np.where(k <= 2.0 * m - 2.0, high, 0.0))
    return out


def _jdlvp(k: np.ndarray, m: float) -> np.ndarray:
    q = k / m
    low = 1.0 - 1.5 * q**2 + 0.75 * q**3
    high = 0.25 * (2.0 - q) ** 3
    return np.where(k <= m, low, np.where(k <= 2.0 * m - 1.0, high, 0.0))


def _dlvp(k: np.ndarray, n: float, p: float) -> np.ndarray:
    ramp = (n + p - k) / p
    return np.where(k <= n, 1.0, np.where(k <= n + p, np.clip(ramp, 0.0, 1.0), 0.0))


def _tt05(k: np.ndarray, N: int, p: float) -> np.ndarray:
    q = k / float(N)
    out = np.zeros_like(q)
    inner = q < 1.0
    out[inner] = np.exp(q[inner] ** p / (q[inner] ** 2 - 1.0))
    return out


def _mmo78(k: np.ndarray, m: float, xi: float, p: int) -> np.ndarray:
    roll = np.exp(-xi * np.maximum(k - m, 0.0) ** (2 * p))
    return np.where(k <= m, 1.0, roll)


def _rsk(k: np.ndarray, N: int, gamma: float, r: float) -> np.ndarray:
    delta = float(N) ** (-gamma)
    sigma = r * delta
    s = sigma / np.sqrt(2.0)
    return 0.5 * (erf(s * (np.pi / delta - k)) + erf(s * (np.pi / delta + k)))


def kernel_coeffs(spec: KernelSpec, N: int) -> np.ndarray:
    """Multiplier vector K̂(k), k = 0..N, for the given family at resolution N."""
    family = spec.family
    if family == "dirichlet":
        # Bare Galerkin projection: K̂ ≡ 1 on every resolved mode.  Useful as
        # an exact no-op (relaxation term vanishes, purging is the identity),
        # which makes scheme-reduction regression tests expressible.
        return np.ones(N + 1)
    m = spec.params(N).m
    k = np.arange(N + 1, dtype=float)
    if family == "feko":
        return _feko(k, m)
    if family == "jackson":
        return _jackson(k, m)
    if family == "jdlvp":
        return _jdlvp(k, m)
    if family == "dlvp":
        return _dlvp(k, spec.r * m, (1.0 - spec.r) * m)
    if family == "tt05":
        return _tt05(k, N, m)
    if family == "mmo78":
        return _mmo78(k, m, 10.0 ** (-spec.mmo_beta), spec.mmo_p)
    if family == "rsk":
        return _rsk(k, N, spec.gamma, spec.r)
    raise KernelParameterError(f"unknown kernel family {family!r}")  # pragma: no cover


def positive_kernel_profile(family: str, m: int, k_max: int | None = None) -> np.ndarray:
    """Multipliers of a positive kernel at an explicit integer bandwidth.

    Returns K̂(k) for k = 0..k_max, defaulting k_max to the family's support
    end (m for feko, 2m−2 for jackson, 2m−1 for jdlvp) so the vector holds
    the complete kernel.  Synthesizing the full vector in real space
    reproduces the nonnegative kernel; truncating below the support end (as
    a resolution-N scheme necessarily does when 2m > N) loses exact
    positivity, which is a property of the truncation, not the kernel.
    """
    family = canonical_family(family)
    supports = {"feko": m, "jackson": 2 * m - 2, "jdlvp": 2 * m - 1}
    if family not in supports:
        raise KernelParameterError(
            f"{family!r} is not one of the positive kernel families {tuple(supports)}")
    if m < 2:
        raise KernelParameterError(f"bandwidth must be >= 2, got {m}")
    if k_max is None:
        k_max = supports[family]
    k = np.arange(k_max + 1, dtype=float)
    fn = {"feko": _feko, "jackson": _jackson, "jdlvp": _jdlvp}[family]
    return fn(k, float(m))


def svv_q_coeffs(N: int, M: float) -> np.ndarray:
    """Viscosity activation profile Q̂(k) = exp(−(k−N)²/(k−M)²) for k > M, else 0."""
    if not 0.0 < M < N:
        raise KernelParameterError(f"need 0 < M < N, got M = {M}, N = {N}")
    k = np.arange(N + 1, dtype=float)
    out = np.zeros(N + 1)
    act = k > M
    out[act] = np.exp(-((k[act] - N) ** 2) / (k[act] - M) ** 2)
    return out


def plateau_end(multipliers: np.ndarray, tol: float = 1e-12) -> int:
    """Largest k of the leading run with K̂(k) = 1 (0 if the plateau is just k=0)."""
    flat = np.abs(multipliers - 1.0) <= tol
    if not flat[0]:
        return 0
    stop = np.argmin(flat) if not flat.all() else len(flat)
    return int(stop) - 1


def apply_kernel(field, multipliers: np.ndarray):
    """Scale a field's spectral coefficients by a |k|-indexed multiplier vector.

    Works for both bases: Fourier half spectra and Chebyshev coefficient
    vectors have length N + 1 with index |k| / polynomial degree.
    """
    from .grids import SpectralField

    coeffs = field.coeffs
    if len(multipliers) != coeffs.shape[-1]:
        raise ValueError(
            f"multiplier length {len(multipliers)} does not match coefficient count {coeffs.shape[-1]}")
    return SpectralField.from_coeffs(field.grid, coeffs * multipliers)
