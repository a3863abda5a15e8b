"""Execute a configured experiment and write its artifacts to a directory.

An experiment produces a deterministic set of CSV files (snapshots,
spectra, per-step energy, error tables against a reference, analyticity
fits) plus a ``manifest.json`` listing every output with a content hash.
Blowup is a reported outcome, not a crash: the manifest carries the
diagnostic and whatever the observers collected up to the failure.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
import time as _clock
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    error_norms,
    fit_delta,
    read_snapshot_csv,
    select_fit_window,
    write_delta_csv,
    write_energy_csv,
    write_error_table_csv,
    write_snapshot_csv,
    write_spectrum_csv,
)
from .config import ExperimentConfig
from .errors import BlowupError, ConfigError, FitError, OracleError, PositivityError
from .kernels import kernel_coeffs
from .models import make_model, make_problem_grid
from .oracles import exact_burgers, fv_reference, solve_dam_break, solve_euler_riemann
from .schemes import EnergyRecorder, SnapshotRecorder, SpectrumRecorder, resolve_dt, run

#: Times at or below this are served from the initial condition directly.
_T_ZERO = 1e-14


def _primitives_at(spec, x_probe: float, gamma: float):
    """(rho, u, p) of the piecewise-constant initial data at one position."""
    q = np.atleast_2d(np.asarray(spec.ic(np.array([x_probe])), dtype=float))
    rho, total_energy, momentum = (float(q[i, 0]) for i in range(3))
    u = momentum / rho
    p = (gamma - 1.0) * (total_energy - 0.5 * rho * u * u)
    return rho, u, p


class Reference:
    """Per-component reference fields on the run grid at requested times.

    ``kind = oracle`` uses the problem's closed-form solution, ``fv`` a
    Rusanov finite-volume run with matching boundary handling, ``file`` a
    previously written snapshot CSV (interpolated onto this grid).  The
    optional restriction window of mirror-extended problems is exposed so
    error norms are taken over the physical half only.
    """

    def __init__(self, config: ExperimentConfig, grid, model):
        self.spec = config.problem
        self.cfg = config.reference
        self.grid = grid
        self.model = model
        self.window = self.spec.params.get("restriction")
        self._cache: dict[float, dict] = {}
        self._solution = None
        kind = self.cfg.kind
        if kind == "oracle" and self.spec.reference is None:
            raise ConfigError(
                f"problem {self.spec.name!r} has no closed-form reference; "
                "use reference.kind = 'fv' or 'file'")
        if kind == "file" and not self.cfg.path:
            raise ConfigError("reference.kind = 'file' needs reference.path")
        if kind == "fv" and self.spec.model == "hl":
            raise ConfigError("no finite-volume reference for the wall model")

    @property
    def enabled(self) -> bool:
        return self.cfg.kind != "none"

    def fields(self, t: float) -> dict[str, np.ndarray]:
        key = round(float(t), 12)
        if key not in self._cache:
            self._cache[key] = self._compute(float(t))
        return self._cache[key]

    def _ic_fields(self) -> dict[str, np.ndarray]:
        values = np.atleast_2d(np.asarray(self.spec.ic(self.grid.x), dtype=float))
        return dict(zip(self.model.names, values))

    def _compute(self, t: float) -> dict[str, np.ndarray]:
        if t <= _T_ZERO:
            return self._ic_fields()
        if self.cfg.kind == "oracle":
            return self._oracle(t)
        if self.cfg.kind == "fv":
            return self._finite_volume(t)
        return self._from_file(t)

    def _oracle(self, t: float) -> dict[str, np.ndarray]:
        rid = self.spec.reference
        x = self.grid.x
        if rid.startswith("exact-burgers:"):
            return {"u": exact_burgers(x, t, rid.split(":", 1)[1])}
        if rid.startswith("euler-riemann:"):
            gamma = self.spec.params.get("gamma", 1.4)
            x0 = self.spec.params.get("diaphragm_x0", 0.0)
            rho, u, p = self._riemann().sample_at(x, t, x0=x0)
            return {"rho": rho,
                    "energy": p / (gamma - 1.0) + 0.5 * rho * u * u,
                    "momentum": rho * u}
        if rid.startswith("shallow-water-riemann:"):
            x0 = self.spec.params.get("dam_x0", 0.0)
            h, u = self._riemann().sample_at(x, t, x0=x0)
            return {"h": h, "hu": h * u}
        raise ConfigError(f"unknown reference id {rid!r}")

    def _riemann(self):
        if self._solution is None:
            params = self.spec.params
            if self.spec.model == "shallow-water":
                self._solution = solve_dam_break(
                    params["h_left"], params["h_right"], g=params.get("g", 1.0))
            else:
                a, b = self.spec.domain
                x0 = params.get("diaphragm_x0", 0.0)
                gamma = params.get("gamma", 1.4)
                left = _primitives_at(self.spec, 0.5 * (a + x0), gamma)
                right = _primitives_at(self.spec, 0.5 * (x0 + b), gamma)
                self._solution = solve_euler_riemann(left, right, gamma=gamma)
        return self._solution

    def _finite_volume(self, t: float) -> dict[str, np.ndarray]:
        spec = self.spec
        bc = "periodic"
        if spec.model == "euler":
            mapping = {"wall": "reflect", "inflow": "inflow", "outflow": "outflow"}
            bc = tuple(mapping[kind] for kind in spec.bc)
        solution = fv_reference(
            spec.model, spec.ic, self.cfg.cells, t,
            domain=spec.domain, bc=bc,
            g=spec.params.get("g", 1.0),
            gamma=spec.params.get("gamma", 1.4))
        return {name: np.interp(self.grid.x, solution.x, solution.q[i])
                for i, name in enumerate(self.model.names)}

    def _from_file(self, t: float) -> dict[str, np.ndarray]:
        stored_t, x, fields = read_snapshot_csv(self.cfg.path)
        if stored_t is not None and abs(stored_t - t) > 1e-9 * max(1.0, abs(t)):
            raise OracleError(
                f"reference file {self.cfg.path!r} holds t = {stored_t:g}, "
                f"but t = {t:g} was requested")
        order = np.argsort(x)
        out = {}
        for name in self.model.names:
            if name not in fields:
                raise OracleError(f"reference file lacks a column for {name!r}")
            out[name] = np.interp(self.grid.x, x[order], fields[name][order])
        return out


def _fit_window_kwargs(config: ExperimentConfig, grid) -> dict:
    """How to choose the δ-fit window for this scheme (see select_fit_window)."""
    scheme = config.scheme
    if scheme.kind in ("sr", "sp"):
        return {"multipliers": kernel_coeffs(scheme.kernel, grid.n_modes)}
    if config.scheme.dealias_resolved:
        cutoff = getattr(grid, "dealias_cutoff", grid.n_modes)
        return {"dealias_cutoff": int(cutoff)}
    return {"dealias_cutoff": int(grid.n_modes)}


def config_summary(config: ExperimentConfig) -> dict:
    """JSON-serializable echo of a config (used when no raw file dict exists)."""
    scheme = config.scheme
    kernel = None
    if scheme.kernel is not None:
        kernel = {k: v for k, v in asdict(scheme.kernel).items() if v is not None}
    return {
        "experiment": {"name": config.name, "problem": config.problem.name},
        "grid": {"num_points": config.num_points, "kosloff_beta": config.kosloff_beta},
        "scheme": {"kind": scheme.kind, "kernel": kernel,
                   "svv_eps": scheme.svv_eps, "svv_cut": scheme.svv_cut,
                   "dealias": scheme.dealias_resolved,
                   "dt": scheme.dt, "cfl": scheme.cfl},
        "time": {"t_end": config.t_end,
                 "snapshots": list(config.snapshot_times),
                 "spectra": list(config.spectrum_times),
                 "track_energy": config.track_energy},
        "reference": asdict(config.reference),
        "fit": asdict(config.fit),
    }


def _git_describe() -> str | None:
    try:
        proc = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=10,
            cwd=Path(__file__).resolve().parent)
    except OSError:
        return None
    return proc.stdout.strip() if proc.returncode == 0 else None


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def execute(config: ExperimentConfig, out_dir, raw_config: dict | None = None) -> dict:
    """Run one experiment, write its artifacts into ``out_dir``, return the manifest.

    The manifest (also written as ``manifest.json``) echoes the config,
    records timing, step counts, purge counts, any blowup diagnostic, and a
    sha256 per output file.  CSV contents are deterministic for identical
    configs; only the manifest's wall-time entry varies between reruns.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    spec = config.problem
    grid = make_problem_grid(spec, config.num_points, config.kosloff_beta)
    model = make_model(spec, grid, dealias=config.scheme.dealias_resolved)
    state = spec.initial_state(model, grid)
    dt = resolve_dt(model, state, config.scheme)

    snapshot_times = sorted(set(config.snapshot_times) | {config.t_end})
    snapshots = SnapshotRecorder(snapshot_times)
    observers = [snapshots]
    spectra = None
    if config.spectrum_times or config.fit.enabled:
        spectrum_times = config.spectrum_times or (config.t_end,)
        spectra = SpectrumRecorder(sorted(set(spectrum_times)))
        observers.append(spectra)
    energy_recorder = EnergyRecorder() if config.track_energy else None
    if energy_recorder is not None:
        observers.append(energy_recorder)

    reference = Reference(config, grid, model)

    started = _clock.perf_counter()
    result = None
    blowup = None
    try:
        result = run(model, state, config.scheme, config.t_end, observers=observers)
    except BlowupError as err:
        blowup = {"message": str(err), "t": float(err.t),
                  "step": int(err.step_index), "field": err.field}
        if isinstance(err, PositivityError):
            blowup.update(node_index=int(err.node_index),
                          x=float(err.x), value=float(err.value))
        max_abs = getattr(err, "max_abs", float("nan"))
        if np.isfinite(max_abs):
            blowup["max_abs"] = float(max_abs)
    wall_time = _clock.perf_counter() - started

    written: list[Path] = []
    snapshot_index: dict[str, float] = {}
    for i, (t, fields) in enumerate(snapshots.snapshots):
        path = out / f"snapshot_{i:03d}.csv"
        write_snapshot_csv(path, grid.x, dict(zip(model.names, fields)), time=t)
        written.append(path)
        snapshot_index[path.name] = float(t)

    spectrum_index: dict[str, float] = {}
    if spectra is not None:
        for i, (t, powers) in enumerate(spectra.spectra):
            path = out / f"spectrum_{i:03d}.csv"
            write_spectrum_csv(path, dict(zip(model.names, powers)), time=t)
            written.append(path)
            spectrum_index[path.name] = float(t)

    if energy_recorder is not None and energy_recorder.t:
        times, energies = energy_recorder.series()
        path = out / "energy.csv"
        write_energy_csv(path, times, energies, model.names)
        written.append(path)

    # Each recorded snapshot pairs 1:1, in order, with a requested time; the
    # error table is labeled by the requested time (identical across sweep
    # members) while norms compare both fields at the actual step time.
    error_rows: list[dict] = []
    if reference.enabled and snapshots.snapshots:
        for i, (t, fields) in enumerate(snapshots.snapshots):
            ref = reference.fields(t)
            t_label = snapshot_times[i] if i < len(snapshot_times) else float(t)
            for j, name in enumerate(model.names):
                norms = error_norms(grid, fields[j], ref[name], window=reference.window)
                error_rows.append({"num_points": config.num_points, "t": float(t_label),
                                   "component": name, **norms})
        path = out / "errors.csv"
        write_error_table_csv(path, error_rows)
        written.append(path)

    fit_failures: list[dict] = []
    if config.fit.enabled and spectra is not None:
        fits, fit_times = [], []
        window_kwargs = _fit_window_kwargs(config, grid)
        for t, powers in spectra.spectra:
            power = np.asarray(powers[config.fit.component], dtype=float)
            try:
                if config.fit.k_min > 0 and config.fit.k_max > 0:
                    k_lo, k_hi = config.fit.k_min, config.fit.k_max
                else:
                    k_lo, k_hi = select_fit_window(power.size - 1, **window_kwargs)
                fits.append(fit_delta(power, k_lo, k_hi,
                                      algebraic_term=config.fit.algebraic_term,
                                      stride=config.fit.stride))
                fit_times.append(float(t))
            except (FitError, ConfigError) as err:
                fit_failures.append({"t": float(t), "error": str(err)})
        if fits:
            path = out / "delta.csv"
            write_delta_csv(path, fits, fit_times)
            written.append(path)

    manifest = {
        "name": config.name,
        "problem": spec.name,
        "package": {"name": "specrelax", "version": __version__},
        "git": _git_describe(),
        "config": raw_config if raw_config is not None else config_summary(config),
        "dt": float(dt),
        "steps": None if result is None else int(result.steps),
        "t_final": blowup["t"] if result is None else float(result.t),
        "purges": None if result is None else len(result.purges),
        "wall_time_s": float(wall_time),
        "blowup": blowup,
        "snapshots": snapshot_index,
        "spectra": spectrum_index,
        "fit_failures": fit_failures,
        "error_rows": len(error_rows),
        "outputs": {p.name: _sha256(p) for p in written},
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
