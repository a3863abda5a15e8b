"""Experiment configuration: TOML schema, validation, sweep expansion.

Schema (all sections except [experiment] optional; unknown keys rejected):

    [experiment]
    name = "sod-sr-feko-615"       # output prefix; defaults to the problem name
    problem = "euler-sod"          # one of the built-in problem names

    [grid]
    num_points = 615
    kosloff_beta = 0.999           # Chebyshev problems only

    [scheme]
    kind = "sr"                    # pps | sr | sp | svv
    kernel = "feko"                # sr/sp: kernel family
    alpha = 0.785                  # relaxation-law exponents
    gamma = 0.99
    r = 0.5                        # dlvp plateau fraction / rsk order
    mmo_beta = 2.5                 # mmo78 rolloff parameters
    mmo_p = 1
    dealias = false                # default depends on kind
    dt = 1e-5                      # exclusive with cfl; default: CFL rule, C=0.4
    cfl = 0.4
    svv_eps = 0.0016               # svv only; default 1/N
    svv_cut = 49.0                 # svv only; default 2*sqrt(N)

    [time]
    t_end = 0.4
    snapshots = [0.2, 0.4]         # nodal dumps at these times
    spectra = [0.2]                # spectral-power dumps
    energy = false                 # per-step energy series

    [reference]
    kind = "oracle"                # oracle | fv | file | none
    cells = 8000                   # fv only
    path = "ref.csv"               # file only (a snapshot CSV at matching t)

    [fit]
    enabled = true                 # delta extraction at each spectra time
    component = 0                  # which component's spectrum
    k_min = 0                      # 0 = automatic window
    k_max = 0
    algebraic_term = false

    [sweep]                        # only for the sweep command
    parameter = "grid.num_points"  # dotted key into this schema
    values = [615, 1599, 2665]
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .kernels import KernelSpec
from .models import ProblemSpec, problem
from .schemes import SchemeConfig

_SECTIONS = ("experiment", "grid", "scheme", "time", "reference", "fit", "sweep")


@dataclass(frozen=True)
class ReferenceConfig:
    kind: str = "none"             # oracle | fv | file | none
    cells: int = 8000
    path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).strip().lower())
        if self.kind not in ("oracle", "fv", "file", "none"):
            raise ConfigError(
                f"reference.kind must be oracle/fv/file/none, got {self.kind!r}")
        if self.kind == "fv" and self.cells < 100:
            raise ConfigError(f"reference.cells must be >= 100, got {self.cells}")
        if self.kind == "file" and not self.path:
            raise ConfigError("reference.path is required when reference.kind = 'file'")


@dataclass(frozen=True)
class FitConfig:
    enabled: bool = False
    component: int = 0
    k_min: int = 0                 # 0 -> automatic (scheme-aware window)
    k_max: int = 0
    algebraic_term: bool = False
    stride: int = 1                # fit only modes divisible by this

    def __post_init__(self):
        if self.stride < 1:
            raise ConfigError(f"fit.stride must be >= 1, got {self.stride}")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem: ProblemSpec
    num_points: int
    kosloff_beta: float
    scheme: SchemeConfig
    t_end: float
    snapshot_times: tuple[float, ...] = ()
    spectrum_times: tuple[float, ...] = ()
    track_energy: bool = False
    reference: ReferenceConfig = field(default_factory=ReferenceConfig)
    fit: FitConfig = field(default_factory=FitConfig)

    def __post_init__(self):
        if self.num_points < 5:
            raise ConfigError(f"grid.num_points must be >= 5, got {self.num_points}")
        if self.problem.basis == "fourier" and self.num_points % 2 == 0:
            raise ConfigError(
                f"grid.num_points must be odd for Fourier problems, got {self.num_points}")
        if not self.t_end > 0.0:
            raise ConfigError(f"time.t_end must be positive, got {self.t_end}")
        for t in self.snapshot_times + self.spectrum_times:
            if t < 0.0:
                raise ConfigError(f"observer times must be >= 0, got {t}")


def _take(section: dict, section_name: str, key: str, expected, default=None,
          required: bool = False):
    if key in section:
        value = section.pop(key)
        if expected is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if expected is not None and not isinstance(value, expected):
            raise ConfigError(
                f"{section_name}.{key} has wrong type {type(value).__name__}")
        return value
    if required:
        raise ConfigError(f"missing required key {section_name}.{key}")
    return default


def _reject_unknown(section: dict, section_name: str) -> None:
    if section:
        key = sorted(section)[0]
        raise ConfigError(f"unknown key {section_name}.{key}")


def parse_config(data: dict) -> ExperimentConfig:
    """Validate a raw mapping (parsed TOML) into an ExperimentConfig."""
    data = {k: dict(v) for k, v in data.items()}
    for key in data:
        if key not in _SECTIONS:
            raise ConfigError(f"unknown section [{key}]")

    exp = data.get("experiment", {})
    problem_name = _take(exp, "experiment", "problem", str, required=True)
    spec = problem(problem_name)
    name = _take(exp, "experiment", "name", str, default=spec.name)
    _reject_unknown(exp, "experiment")

    grid_sec = data.get("grid", {})
    num_points = _take(grid_sec, "grid", "num_points", int, required=True)
    kosloff_beta = _take(grid_sec, "grid", "kosloff_beta", float, default=0.999)
    _reject_unknown(grid_sec, "grid")

    sch = data.get("scheme", {})
    kind = _take(sch, "scheme", "kind", str, default="pps")
    kernel_family = _take(sch, "scheme", "kernel", str)
    alpha = _take(sch, "scheme", "alpha", float)
    gamma = _take(sch, "scheme", "gamma", float)
    r = _take(sch, "scheme", "r", float, default=0.5)
    mmo_beta = _take(sch, "scheme", "mmo_beta", float, default=2.5)
    mmo_p = _take(sch, "scheme", "mmo_p", int, default=1)
    kernel = None
    if kernel_family is not None:
        if alpha is None or gamma is None:
            raise ConfigError("scheme.alpha and scheme.gamma are required with a kernel")
        kernel = KernelSpec(kernel_family, alpha=alpha, gamma=gamma, r=r,
                            mmo_beta=mmo_beta, mmo_p=mmo_p)
    scheme = SchemeConfig(
        kind=kind,
        kernel=kernel,
        svv_eps=_take(sch, "scheme", "svv_eps", float),
        svv_cut=_take(sch, "scheme", "svv_cut", float),
        dealias=_take(sch, "scheme", "dealias", bool),
        dt=_take(sch, "scheme", "dt", float),
        cfl=_take(sch, "scheme", "cfl", float),
    )
    _reject_unknown(sch, "scheme")

    time_sec = data.get("time", {})
    t_end = _take(time_sec, "time", "t_end", float, required=True)
    snapshots = tuple(float(t) for t in _take(time_sec, "time", "snapshots", list, default=[]))
    spectra = tuple(float(t) for t in _take(time_sec, "time", "spectra", list, default=[]))
    track_energy = _take(time_sec, "time", "energy", bool, default=False)
    _reject_unknown(time_sec, "time")

    ref_sec = data.get("reference", {})
    reference = ReferenceConfig(
        kind=_take(ref_sec, "reference", "kind", str, default="none"),
        cells=_take(ref_sec, "reference", "cells", int, default=8000),
        path=_take(ref_sec, "reference", "path", str),
    )
    _reject_unknown(ref_sec, "reference")

    fit_sec = data.get("fit", {})
    fit = FitConfig(
        enabled=_take(fit_sec, "fit", "enabled", bool, default=False),
        component=_take(fit_sec, "fit", "component", int, default=0),
        k_min=_take(fit_sec, "fit", "k_min", int, default=0),
        k_max=_take(fit_sec, "fit", "k_max", int, default=0),
        algebraic_term=_take(fit_sec, "fit", "algebraic_term", bool, default=False),
        stride=_take(fit_sec, "fit", "stride", int, default=1),
    )
    _reject_unknown(fit_sec, "fit")

    return ExperimentConfig(
        name=name, problem=spec, num_points=num_points, kosloff_beta=kosloff_beta,
        scheme=scheme, t_end=t_end, snapshot_times=snapshots, spectrum_times=spectra,
        track_energy=track_energy, reference=reference, fit=fit)


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"cannot parse {path}: {err}") from err
    return parse_config(data)


def load_raw(path) -> dict:
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"cannot parse {path}: {err}") from err


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

_SWEEPABLE = {
    "grid.num_points": ("num_points", int),
    "grid.kosloff_beta": ("kosloff_beta", float),
    "scheme.alpha": ("scheme.kernel.alpha", float),
    "scheme.gamma": ("scheme.kernel.gamma", float),
    "scheme.dt": ("scheme.dt", float),
    "scheme.svv_eps": ("scheme.svv_eps", float),
    "time.t_end": ("t_end", float),
}


def _with_value(config: ExperimentConfig, dotted: str, value) -> ExperimentConfig:
    target, caster = _SWEEPABLE[dotted]
    value = caster(value)
    if target == "num_points":
        return replace(config, num_points=value)
    if target == "kosloff_beta":
        return replace(config, kosloff_beta=value)
    if target == "t_end":
        return replace(config, t_end=value)
    if target == "scheme.dt":
        return replace(config, scheme=replace(config.scheme, dt=value, cfl=None))
    if target == "scheme.svv_eps":
        return replace(config, scheme=replace(config.scheme, svv_eps=value))
    if config.scheme.kernel is None:
        raise ConfigError(f"sweep over {dotted} needs a scheme with a kernel")
    kernel = replace(config.scheme.kernel,
                     **{target.rsplit(".", 1)[1]: value})
    return replace(config, scheme=replace(config.scheme, kernel=kernel))


def expand_sweep(data: dict) -> list[ExperimentConfig]:
    """Expand a config with a [sweep] section into one config per value.

    Member names get a ``-<parameter>-<value>`` suffix so outputs do not
    collide.  A config without [sweep] expands to itself.
    """
    data = dict(data)
    sweep = dict(data.pop("sweep", {}))
    base = parse_config(data)
    if not sweep:
        return [base]
    parameter = _take(sweep, "sweep", "parameter", str, required=True)
    values = _take(sweep, "sweep", "values", list, required=True)
    _reject_unknown(sweep, "sweep")
    if parameter not in _SWEEPABLE:
        raise ConfigError(
            f"sweep.parameter must be one of {sorted(_SWEEPABLE)}, got {parameter!r}")
    if not values:
        raise ConfigError("sweep.values must be non-empty")
    members = []
    short = parameter.rsplit(".", 1)[1]
    for value in values:
        member = _with_value(base, parameter, value)
        members.append(replace(member, name=f"{base.name}-{short}-{value:g}"
                               if isinstance(value, float)
                               else f"{base.name}-{short}-{value}"))
    return members
