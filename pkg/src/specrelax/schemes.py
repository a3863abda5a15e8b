"""Time integration of pseudospectral semi-discretizations.

Four tendency assemblies share one classical fourth-order Runge–Kutta loop:

* ``pps`` — the bare (optionally dealiased) pseudospectral tendency supplied
  by the model;
* ``sr``  — ``pps`` plus a linear relaxation toward the mollified field,
  ``(K̂(k) − 1)/τ`` applied diagonally in coefficient space to every
  component;
* ``sp``  — ``pps`` integrated unmodified, with the kernel multiplier applied
  *hard* to every component once each ``τ`` of simulated time (periodic
  purging);
* ``svv`` — ``pps`` plus a spectral viscosity term ``−ε (2πk/L)² Q̂(k) û``
  acting on the upper third of the spectrum (Fourier bases only).

Models are duck-typed.  A model owns its grid and exposes::

    names                      component names, e.g. ("rho", "energy", "momentum")
    grid                       FourierGrid or ChebyshevGrid
    rhs(state)                 tendency in the state representation
    coefficient_term(state, m) state-space image of the diagonal multiplier m
    apply_multiplier(state, m) state with coefficients scaled by m
    max_wavespeed(state)       for CFL-based step selection
    nodal_components(state)    (ncomp, num_points) real nodal values
    power_spectra(state)       (ncomp, n_modes + 1) spectral power
    energy(state)              (ncomp,) discrete L² energies
    state_from_nodal(values)   build the evolved representation

Fourier models evolve coefficient arrays; the Chebyshev compressible-flow
model evolves nodal values.  The integrator never needs to know which.

The time step is frozen: chosen once from the initial condition (CFL rule
``dt = C·Δx_min/max|λ|`` with C = 0.4 by default) or given explicitly, and
held for the whole run.  A run ends at the first step whose end time reaches
``t_end``.  Observers fire at their requested times using nearest-completed-
step semantics — no interpolation is ever performed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowupError, ConfigError
from .kernels import KernelSpec, kernel_coeffs, svv_q_coeffs

KINDS = ("pps", "sr", "sp", "svv")

#: Default dealiasing per scheme kind.  The relaxation/purging schemes rely on
#: the kernel itself to control aliasing; the unregularized and viscous
#: schemes need the 2/3-rule to stay meaningful.
DEALIAS_DEFAULT = {"pps": True, "svv": True, "sr": False, "sp": False}

DEFAULT_CFL = 0.4


@dataclass(frozen=True)
class SchemeConfig:
    """Which stabilization to run and its parameters.

    ``kernel`` is required for ``sr``/``sp`` and rejected otherwise.
    ``svv_eps``/``svv_cut`` parameterize the viscosity profile (defaults
    ``1/N`` and ``2√N``) and are only meaningful for ``svv``.  ``dealias``
    overrides the per-kind default.  Exactly one of ``dt`` (explicit step)
    and ``cfl`` (safety factor) may be given; with neither, the CFL rule with
    C = 0.4 is used.
    """

    kind: str
    kernel: KernelSpec | None = None
    svv_eps: float | None = None
    svv_cut: float | None = None
    dealias: bool | None = None
    dt: float | None = None
    cfl: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).strip().lower())
        if self.kind not in KINDS:
            raise ConfigError(f"scheme.kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind in ("sr", "sp"):
            if self.kernel is None:
                raise ConfigError(f"scheme.kernel is required for kind {self.kind!r}")
        elif self.kernel is not None:
            raise ConfigError(f"scheme.kernel is only meaningful for sr/sp, not {self.kind!r}")
        if self.kind != "svv" and (self.svv_eps is not None or self.svv_cut is not None):
            raise ConfigError("scheme.svv_eps/svv_cut are only meaningful for kind 'svv'")
        if self.svv_eps is not None and self.svv_eps < 0.0:
            raise ConfigError(f"scheme.svv_eps must be >= 0, got {self.svv_eps}")
        if self.dt is not None and self.cfl is not None:
            raise ConfigError("give scheme.dt or scheme.cfl, not both")
        if self.dt is not None and not self.dt > 0.0:
            raise ConfigError(f"scheme.dt must be positive, got {self.dt}")
        if self.cfl is not None and not self.cfl > 0.0:
            raise ConfigError(f"scheme.cfl must be positive, got {self.cfl}")

    @property
    def dealias_resolved(self) -> bool:
        if self.dealias is None:
            return DEALIAS_DEFAULT[self.kind]
        return bool(self.dealias)


# ---------------------------------------------------------------------------
# Tendency assembly
# ---------------------------------------------------------------------------

def relaxation_multiplier(kernel: KernelSpec, n_modes: int) -> tuple[np.ndarray, float]:
    """Diagonal relaxation operator ``(K̂(k) − 1)/τ`` and the timescale τ."""
    coeffs = kernel_coeffs(kernel, n_modes)
    tau = kernel.params(n_modes).tau
    return (coeffs - 1.0) / tau, tau


def svv_multiplier(grid, eps: float | None = None, cut: float | None = None) -> np.ndarray:
    """Diagonal viscosity operator ``−ε (2πk/L)² Q̂(k)`` on a Fourier grid."""
    if not hasattr(grid, "wavenumbers"):
        raise ConfigError("svv is defined for Fourier bases only")
    n = grid.n_modes
    if eps is None:
        eps = 1.0 / n
    if cut is None:
        cut = 2.0 * math.sqrt(n)
    q = svv_q_coeffs(n, cut)
    return -eps * grid.wavenumbers**2 * q


def rhs_pps(state, model):
    """Bare pseudospectral tendency (the model's own right-hand side)."""
    return model.rhs(state)


def rhs_sr(state, model, multiplier):
    """Pseudospectral tendency plus diagonal relaxation toward the mollified field."""
    return model.rhs(state) + model.coefficient_term(state, multiplier)


def rhs_svv(state, model, multiplier):
    """Pseudospectral tendency plus the spectral viscosity term."""
    return model.rhs(state) + model.coefficient_term(state, multiplier)


def build_rhs(model, scheme: SchemeConfig):
    """Bind a SchemeConfig to a model, returning ``rhs(state) -> tendency``."""
    if scheme.kind in ("pps", "sp"):
        return model.rhs
    if scheme.kind == "sr":
        mult, _ = relaxation_multiplier(scheme.kernel, model.grid.n_modes)
        return lambda state: rhs_sr(state, model, mult)
    mult = svv_multiplier(model.grid, scheme.svv_eps, scheme.svv_cut)
    return lambda state: rhs_svv(state, model, mult)


# ---------------------------------------------------------------------------
# RK4
# ---------------------------------------------------------------------------

def _check_finite(arr: np.ndarray, what: str, names=None) -> None:
    finite = np.isfinite(arr)
    if finite.all():
        return
    field_name = what
    max_abs = float("nan")
    if names is not None and arr.ndim >= 2:
        comp_bad = ~finite.reshape(arr.shape[0], -1).all(axis=1)
        idx = int(np.argmax(comp_bad))
        field_name = names[idx] if idx < len(names) else what
        comp = np.abs(np.asarray(arr[idx]).ravel())
        good = comp[np.isfinite(comp)]
        if good.size:
            max_abs = float(good.max())
    raise BlowupError(
        f"non-finite values in {what}" + (f" (component {field_name!r})" if names else ""),
        t=float("nan"), step_index=-1, field=field_name, max_abs=max_abs)


def rk4_step(state: np.ndarray, rhs, dt: float, names=None) -> np.ndarray:
    """One classical fourth-order Runge–Kutta step.

    Raises BlowupError as soon as any stage tendency goes non-finite; the
    caller stamps the error with the simulation time and step index.
    Overflow warnings are silenced because the explicit finiteness checks
    are the intended detection path.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = rhs(state)
        _check_finite(k1, "RK4 stage 1", names)
        k2 = rhs(state + (0.5 * dt) * k1)
        _check_finite(k2, "RK4 stage 2", names)
        k3 = rhs(state + (0.5 * dt) * k2)
        _check_finite(k3, "RK4 stage 3", names)
        k4 = rhs(state + dt * k3)
        _check_finite(k4, "RK4 stage 4", names)
        return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


# ---------------------------------------------------------------------------
# Observers
# ---------------------------------------------------------------------------

class Observer:
    """Collects data at requested simulation times.

    Requested times are matched to the nearest completed step (ties go to
    the later step); times at or beyond the end of the run are served with
    the final state.  Subclasses with ``every_step = True`` ignore ``times``
    and record after every step, including the initial state.
    """

    every_step = False

    def __init__(self, times=()):
        self.times = sorted(float(t) for t in np.atleast_1d(np.asarray(times, dtype=float)))

    def record(self, t: float, state, model) -> None:  # pragma: no cover - interface
        raise NotImplementedError


class SnapshotRecorder(Observer):
    """Stores (t, nodal components) pairs at the requested times."""

    def __init__(self, times):
        super().__init__(times)
        self.snapshots: list[tuple[float, np.ndarray]] = []

    def record(self, t, state, model):
        self.snapshots.append((t, np.array(model.nodal_components(state), copy=True)))


class SpectrumRecorder(Observer):
    """Stores (t, per-component spectral power) pairs at the requested times."""

    def __init__(self, times):
        super().__init__(times)
        self.spectra: list[tuple[float, np.ndarray]] = []

    def record(self, t, state, model):
        self.spectra.append((t, np.array(model.power_spectra(state), copy=True)))


class EnergyRecorder(Observer):
    """Tracks per-component discrete L² energy after every step."""

    every_step = True

    def __init__(self):
        super().__init__(())
        self.t: list[float] = []
        self.energies: list[np.ndarray] = []

    def record(self, t, state, model):
        self.t.append(t)
        self.energies.append(np.array(model.energy(state), copy=True))

    def series(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.t), np.asarray(self.energies)


# ---------------------------------------------------------------------------
# The run loop
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PurgeEvent:
    """One hard application of the kernel multiplier during an sp run."""

    t: float
    step: int
    energy_before: np.ndarray
    energy_after: np.ndarray


@dataclass
class RunResult:
    state: np.ndarray
    t: float
    steps: int
    dt: float
    scheme: SchemeConfig
    purges: list[PurgeEvent] = field(default_factory=list)


def resolve_dt(model, state, scheme: SchemeConfig) -> float:
    """Frozen step size: explicit ``dt`` or the CFL rule at the initial state."""
    if scheme.dt is not None:
        return float(scheme.dt)
    safety = DEFAULT_CFL if scheme.cfl is None else scheme.cfl
    speed = float(model.max_wavespeed(state))
    if not np.isfinite(speed) or speed <= 0.0:
        raise ConfigError(
            "initial max wavespeed is zero or non-finite; give scheme.dt explicitly")
    return safety * model.grid.min_spacing / speed


def _stamp(err: BlowupError, t: float, step: int) -> BlowupError:
    if not np.isfinite(getattr(err, "t", float("nan"))):
        err.t = float(t)
    if getattr(err, "step_index", -1) < 0:
        err.step_index = int(step)
    return err


def run(model, state, scheme: SchemeConfig, t_end: float, *,
        observers=(), max_steps: int = 50_000_000) -> RunResult:
    """Integrate ``state`` to ``t_end`` under the given scheme.

    Raises BlowupError (or its PositivityError subclass) stamped with the
    failing time and step index if the solution leaves the finite/admissible
    set; the partial trajectory collected by observers up to that point
    remains available on the observer objects.
    """
    if not t_end > 0.0:
        raise ConfigError(f"t_end must be positive, got {t_end}")
    state = np.array(state, copy=True)
    names = getattr(model, "names", None)

    rhs = build_rhs(model, scheme)
    purge_mult = None
    tau = None
    if scheme.kind == "sp":
        purge_mult = kernel_coeffs(scheme.kernel, model.grid.n_modes)
        tau = scheme.kernel.params(model.grid.n_modes).tau

    dt = resolve_dt(model, state, scheme)
    if tau is not None and dt > tau * (1.0 + 1e-12):
        raise ConfigError(
            f"sp requires dt <= tau (purge period); dt={dt:.6g} exceeds tau={tau:.6g}")

    tol = 1e-9 * dt
    try:
        _check_finite(state, "initial state", names)
    except BlowupError as err:
        raise _stamp(err, 0.0, 0)

    observers = list(observers)
    pointers = [0] * len(observers)
    for obs in observers:
        if obs.every_step:
            obs.record(0.0, state, model)
    for i, obs in enumerate(observers):
        if not obs.every_step:
            while pointers[i] < len(obs.times) and obs.times[pointers[i]] <= tol:
                obs.record(0.0, state, model)
                pointers[i] += 1

    purges: list[PurgeEvent] = []
    next_purge = 1
    t = 0.0
    step = 0
    while t < t_end - tol:
        if step >= max_steps:
            raise BlowupError(
                f"exceeded max_steps={max_steps} before reaching t_end={t_end}",
                t=t, step_index=step, field="(all)")
        prev_state = state
        prev_t = t
        try:
            state = rk4_step(state, rhs, dt, names)
        except BlowupError as err:
            raise _stamp(err, prev_t, step + 1)
        step += 1
        t = step * dt
        try:
            _check_finite(state, "updated state", names)
        except BlowupError as err:
            raise _stamp(err, t, step)

        if purge_mult is not None:
            while next_purge * tau <= t + tol:
                e_before = np.array(model.energy(state), copy=True)
                state = model.apply_multiplier(state, purge_mult)
                e_after = np.array(model.energy(state), copy=True)
                purges.append(PurgeEvent(t=t, step=step,
                                         energy_before=e_before, energy_after=e_after))
                next_purge += 1

        for i, obs in enumerate(observers):
            if obs.every_step:
                obs.record(t, state, model)
                continue
            while pointers[i] < len(obs.times) and obs.times[pointers[i]] <= t + tol:
                target = obs.times[pointers[i]]
                if (target - prev_t) < (t - target):
                    obs.record(prev_t, prev_state, model)
                else:
                    obs.record(t, state, model)
                pointers[i] += 1

    for i, obs in enumerate(observers):
        if obs.every_step:
            continue
        while pointers[i] < len(obs.times):
            obs.record(t, state, model)
            pointers[i] += 1

    return RunResult(state=state, t=t, steps=step, dt=dt, scheme=scheme, purges=purges)
