"""Post-processing: discrete norms, convergence orders, spectrum fits, CSV output.

The analyticity-strip machinery lives here.  A field with its nearest
complex-plane singularity a distance δ from the real axis has spectral power
``|û_k|² ≈ A² k^{−2(μ+1)} e^{−2δk}``; fitting ``ln|û_k|²`` linearly in k over
a window of exponential decay recovers δ, and extrapolating the δ(t) series
to zero locates the real singularity time t*.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FitError
from .kernels import plateau_end

FLOAT_FMT = "%.17g"

#: Relative amplitude below which spectral coefficients are considered
#: rounding noise: power below (1e−13 · max|û|)² is excluded from fits.
NOISE_RELATIVE = 1e-13
NOISE_ABSOLUTE_POWER = 1e-28


# ---------------------------------------------------------------------------
# Norms and convergence orders
# ---------------------------------------------------------------------------

def energy(grid, nodal: np.ndarray) -> float:
    """Discrete ∫u² dx with the grid's quadrature weights."""
    u = np.asarray(nodal, dtype=float)
    return float(np.sum(u * u * grid.quadrature_weights, axis=-1))


def error_norms(grid, approx: np.ndarray, reference,
                norms=("l1", "l2", "linf"), window=None) -> dict[str, float]:
    """Weighted error norms of a nodal field against a reference.

    ``reference`` may be an array on the grid nodes or a callable of x.
    ``window=(x0, x1)`` restricts the norms to nodes inside that interval
    (used to read back the physical half of a mirror-extended run).
    """
    u = np.asarray(approx, dtype=float)
    if u.shape[-1] != grid.num_points:
        raise ConfigError(
            f"approx has {u.shape[-1]} nodes, grid has {grid.num_points}")
    ref = reference(grid.x) if callable(reference) else np.asarray(reference, dtype=float)
    err = u - ref
    w = grid.quadrature_weights
    if window is not None:
        x0, x1 = window
        inside = (grid.x >= x0) & (grid.x <= x1)
        err = err[..., inside]
        w = w[inside]
    out: dict[str, float] = {}
    for norm in norms:
        key = norm.lower()
        if key == "l1":
            out["l1"] = float(np.sum(w * np.abs(err)))
        elif key == "l2":
            out["l2"] = float(np.sqrt(np.sum(w * err**2)))
        elif key == "linf":
            out["linf"] = float(np.max(np.abs(err)))
        else:
            raise ConfigError(f"unknown norm {norm!r}; choose from l1/l2/linf")
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    num_points: int
    error: float
    order: float | None


def convergence_table(resolutions, errors) -> list[ConvergenceRow]:
    """Pairwise orders ln(e_a/e_b)/ln(N_b/N_a) down a refinement sequence.

    A zero error on either side of a pair leaves that order blank (None)
    rather than producing ±inf.
    """
    res = [int(n) for n in resolutions]
    errs = [float(e) for e in errors]
    if len(res) != len(errs):
        raise ConfigError("resolutions and errors must have equal length")
    if sorted(res) != res:
        raise ConfigError("resolutions must be increasing")
    rows: list[ConvergenceRow] = []
    for i, (n, e) in enumerate(zip(res, errs)):
        order = None
        if i > 0 and errs[i - 1] > 0.0 and e > 0.0:
            order = float(np.log(errs[i - 1] / e) / np.log(n / res[i - 1]))
        rows.append(ConvergenceRow(num_points=n, error=e, order=order))
    return rows


# ---------------------------------------------------------------------------
# Analyticity-strip fits
# ---------------------------------------------------------------------------

def noise_floor(power: np.ndarray) -> float:
    """Spectral-power level below which coefficients are rounding noise."""
    peak_amp = float(np.sqrt(np.max(power)))
    return max(NOISE_ABSOLUTE_POWER, (NOISE_RELATIVE * peak_amp) ** 2)


# Minimum exponential drop 2δ(k_hi − k_lo) in ln-power across the fitted
# modes for δ to be resolvable at all: below ~2 the exponential tail is
# indistinguishable from the algebraic prefactor over that window.
MIN_LN_DROP = 2.0


@dataclass(frozen=True)
class DeltaFit:
    """Result of one exponential-tail fit of ln|û_k|²."""

    delta: float
    mu: float | None        # pole order estimate when the algebraic term is fitted
    intercept: float
    residual: float         # RMS of ln-space fit residuals
    k_min: int
    k_max: int
    n_used: int
    flagged: bool           # negative δ, poor fit quality, or unresolvably small δ


def fit_delta(power: np.ndarray, k_min: int, k_max: int, *,
              algebraic_term: bool = False, k_scale: float = 1.0,
              min_modes: int = 10, residual_flag: float = 0.5,
              stride: int = 1) -> DeltaFit:
    """Least-squares fit of ln|û_k|² = c − 2(μ+1)ln k − 2δk over [k_min, k_max].

    ``power`` is indexed by integer mode number; ``k_scale`` converts mode
    number to the wavenumber unit in which δ is wanted (e.g. 2π/L for a
    physical-length δ).  Modes at or below the noise floor are excluded;
    fewer than ``min_modes`` usable modes raises FitError.  ``flagged`` is
    set (never clamped or hidden) for a negative δ, an RMS ln-residual
    above ``residual_flag``, or a δ too small to resolve over the used
    modes (exponential drop below MIN_LN_DROP).

    ``stride > 1`` restricts the fit to modes divisible by the stride: data
    whose period divides the domain length populate only that sublattice,
    and the empty modes in between carry amplified rounding noise rather
    than tail information once the dynamics become strongly straining.
    """
    power = np.asarray(power, dtype=float)
    if power.ndim != 1:
        raise ConfigError("fit_delta expects a single component's power spectrum")
    if not 0 < k_min < k_max < power.size:
        raise ConfigError(
            f"fit window [{k_min}, {k_max}] invalid for spectrum of size {power.size}")
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}")
    k = np.arange(k_min, k_max + 1)
    if stride > 1:
        k = k[k % stride == 0]
        if k.size == 0:
            raise ConfigError(
                f"no modes divisible by {stride} inside [{k_min}, {k_max}]")
    p = power[k]
    usable = p > noise_floor(power)
    if int(usable.sum()) < min_modes:
        raise FitError(
            f"only {int(usable.sum())} modes above the noise floor in [{k_min}, {k_max}]; "
            f"need at least {min_modes}")
    k = k[usable].astype(float)
    y = np.log(p[usable])
    cols = [np.ones_like(k), k]
    if algebraic_term:
        cols.append(np.log(k))
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    delta = float(-0.5 * coef[1] / k_scale)
    mu = float(-0.5 * coef[2] - 1.0) if algebraic_term else None
    ln_drop = 2.0 * delta * k_scale * (k[-1] - k[0])
    return DeltaFit(delta=delta, mu=mu, intercept=float(coef[0]), residual=rms,
                    k_min=int(k_min), k_max=int(k_max), n_used=int(k.size),
                    flagged=(delta < 0.0) or (rms > residual_flag)
                            or (ln_drop < MIN_LN_DROP))


def select_fit_window(n_modes: int, *, multipliers: np.ndarray | None = None,
                      dealias_cutoff: int | None = None,
                      k_min_floor: int = 8) -> tuple[int, int]:
    """Fit window for a scheme's spectra.

    Relaxation runs fit only where the kernel is non-dissipative: k_max is
    the end of the kernel's unit plateau.  Dealiased runs fit up to the 2/3
    cutoff.  The lower edge avoids the energy-containing modes:
    k_min = max(k_min_floor, k_max // 8).
    """
    if (multipliers is None) == (dealias_cutoff is None):
        raise ConfigError("give exactly one of multipliers / dealias_cutoff")
    if multipliers is not None:
        k_max = plateau_end(np.asarray(multipliers))
    else:
        k_max = int(dealias_cutoff)
    k_max = min(int(k_max), n_modes)
    k_min = max(int(k_min_floor), k_max // 8)
    if k_min >= k_max:
        raise ConfigError(f"degenerate fit window [{k_min}, {k_max}]")
    return k_min, k_max


def usable_fit_range(power: np.ndarray, k_min: int = 8, *,
                     residual_cap: float = 0.35, min_modes: int = 10,
                     growth: float = 1.05, stride: int = 1) -> int:
    """Largest k_max for which the exponential fit over [k_min, k_max] stays clean.

    Expands the window geometrically while (a) every extra mode sits above
    the noise floor and (b) the RMS ln-residual of the linear fit stays
    below ``residual_cap``.  Returns the last accepted k_max.  This measures
    how much of a spectrum is genuinely exponential — the quantity that a
    dissipative-scheme tail extends relative to a dealiased one.  ``stride``
    has the fit_delta meaning (only modes divisible by it are considered).
    """
    power = np.asarray(power, dtype=float)
    floor = noise_floor(power)
    lattice = np.arange(power.size)
    if stride > 1:
        lattice = lattice[lattice % stride == 0]
    above = lattice[power[lattice] > floor]
    if above.size == 0 or above.max() <= k_min:
        raise FitError("no modes above the noise floor beyond k_min")
    hard_max = int(above.max())
    best = 0
    k_max = k_min + (min_modes + 2) * stride
    while k_max <= hard_max:
        window = lattice[(lattice >= k_min) & (lattice <= k_max)]
        if np.any(power[window] <= floor):
            break
        fit = fit_delta(power, k_min, k_max, min_modes=min_modes, stride=stride)
        if fit.residual > residual_cap:
            break
        best = k_max
        k_max = max(k_max + 1, int(k_max * growth))
    if best == 0:
        raise FitError(
            f"no usable window starting at k_min={k_min} under residual cap {residual_cap}")
    return best


@dataclass(frozen=True)
class TStarFit:
    t_star: float
    slope: float
    intercept: float
    residual: float
    power: float


def fit_t_star(times, deltas, power: float = 1.0) -> TStarFit:
    """Extrapolate a decreasing δ(t) series to its zero crossing.

    Fits δ^(1/power) linearly in t and returns the t-axis intercept.
    ``power=1`` is the plain linear intercept; for a singularity approached
    as δ ∝ (t*−t)^p the choice ``power=p`` linearizes the series exactly.
    """
    t = np.asarray(times, dtype=float)
    d = np.asarray(deltas, dtype=float)
    if t.shape != d.shape or t.size < 2:
        raise ConfigError("need at least two (t, delta) pairs of equal length")
    if np.any(d <= 0.0):
        raise FitError("delta series must be positive to extrapolate its zero crossing")
    y = d ** (1.0 / power)
    design = np.column_stack([t, np.ones_like(t)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    if not slope < 0.0:
        raise FitError("delta series is not decreasing; no finite zero crossing")
    resid = y - design @ np.array([slope, intercept])
    return TStarFit(t_star=float(-intercept / slope), slope=float(slope),
                    intercept=float(intercept),
                    residual=float(np.sqrt(np.mean(resid**2))), power=float(power))


# ---------------------------------------------------------------------------
# CSV output (all floats at 17 significant digits; reruns are byte-identical)
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FMT % float(value)


def _write_rows(path, header: list[str], rows, comment: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_snapshot_csv(path, x: np.ndarray, fields: dict[str, np.ndarray],
                       time: float | None = None) -> None:
    """Columns: x, then one column per component, one row per node."""
    names = list(fields)
    arrays = [np.asarray(fields[name], dtype=float) for name in names]
    comment = None if time is None else f"t = {FLOAT_FMT % time}"
    rows = zip(x, *arrays)
    _write_rows(path, ["x"] + names, rows, comment)


def write_spectrum_csv(path, powers: dict[str, np.ndarray],
                       time: float | None = None) -> None:
    """Columns: mode number k, then |û_k|² per component."""
    names = list(powers)
    arrays = [np.asarray(powers[name], dtype=float) for name in names]
    k = np.arange(arrays[0].size)
    comment = None if time is None else f"t = {FLOAT_FMT % time}"
    _write_rows(path, ["k"] + [f"power_{n}" for n in names], zip(k, *arrays), comment)


def write_error_table_csv(path, rows: list[dict]) -> None:
    """Rows of {num_points, t, component, l1, l2, linf, order}.

    ``component`` and ``order`` may be absent/None; absent keys become
    empty cells so single-field and multi-field tables share one format.
    """
    header = ["num_points", "t", "component", "l1", "l2", "linf", "order"]
    data = [[row.get(col) for col in header] for row in rows]
    _write_rows(path, header, data)


def write_energy_csv(path, times, energies, names) -> None:
    """Columns: t, then the discrete L² energy of each component per step."""
    table = np.atleast_2d(np.asarray(energies, dtype=float))
    rows = zip(np.asarray(times, dtype=float), *table.T)
    _write_rows(path, ["t"] + [f"energy_{n}" for n in names], rows)


def write_delta_csv(path, rows: list[DeltaFit], times) -> None:
    """One δ fit per requested time: t, delta, k_min, k_max, n_used, residual, flagged."""
    header = ["t", "delta", "k_min", "k_max", "n_used", "residual", "flagged"]
    data = [[t, f.delta, f.k_min, f.k_max, f.n_used, f.residual, f.flagged]
            for t, f in zip(times, rows)]
    _write_rows(path, header, data)


def read_snapshot_csv(path) -> tuple[float | None, np.ndarray, dict[str, np.ndarray]]:
    """Inverse of write_snapshot_csv (used for high-resolution self-references)."""
    time = None
    with open(path, newline="") as fh:
        first = fh.readline()
        if first.startswith("#"):
            if "=" in first:
                time = float(first.split("=", 1)[1])
            header_line = fh.readline()
        else:
            header_line = first
        names = [s.strip() for s in header_line.strip().split(",")]
        table = [[float(v) for v in row] for row in csv.reader(fh) if row]
    data = np.asarray(table, dtype=float).T
    fields = {name: data[i + 1] for i, name in enumerate(names[1:])}
    return time, data[0], fields
