"""Acceptance gate: eleven end-to-end criteria, one test (and one printed
PASS/FAIL line) each.

Every criterion drives the public machinery — recipes, sweep expansion, the
experiment runner, the oracles, and the fit tools — from scratch, so this
module doubles as a full-system regression gate.  Expect roughly 35 minutes
on one core; the heavy pieces are criterion 2 (finest convergence member),
criterion 7 (blast wave integrated to t = 0.032 at a sub-microsecond step),
and criterion 9 (two wall-model resolutions plus a dealiased control run).

Run just this gate with:  pytest tests/test_acceptance.py -v -s
"""

import csv

import numpy as np

from specrelax.analysis import fit_delta, fit_t_star, read_snapshot_csv, usable_fit_range
from specrelax.config import expand_sweep
from specrelax.errors import FitError
from specrelax.experiments import execute
from specrelax.kernels import (
    FAMILIES,
    KernelSpec,
    kernel_coeffs,
    plateau_end,
    positive_kernel_profile,
    svv_q_coeffs,
)
from specrelax.models import make_model, make_problem_grid, problem
from specrelax.oracles import solve_dam_break, solve_euler_riemann
from specrelax.recipes import recipe
from specrelax.schemes import SchemeConfig, run

GAS_GAMMA = 1.4


def gate(number: int, ok: bool, detail: str) -> None:
    """The one pass/fail line per criterion."""
    line = f"criterion {number:02d} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    assert ok, line


def run_recipe(name, out_root, values=None):
    """Execute a recipe (expanding any sweep); returns {name: (config, manifest, dir)}."""
    data = recipe(name)
    if values is not None:
        data["sweep"]["values"] = list(values)
    results = {}
    for config in expand_sweep(data):
        out = out_root / config.name
        results[config.name] = (config, execute(config, out), out)
    return results


def run_one(name, out_root):
    (result,) = run_recipe(name, out_root).values()
    return result


def l1_table(out_dir):
    """errors.csv -> {(num_points, t, component): l1}."""
    with open(out_dir / "errors.csv", newline="") as fh:
        return {(int(r["num_points"]), float(r["t"]), r["component"]): float(r["l1"])
                for r in csv.DictReader(fh)}


def delta_table(out_dir):
    """delta.csv -> list of (t, delta, flagged) rows in time order."""
    with open(out_dir / "delta.csv", newline="") as fh:
        return [(float(r["t"]), float(r["delta"]), r["flagged"] == "1")
                for r in csv.DictReader(fh)]


def spectrum_at(manifest, out_dir, t_requested, column):
    """Power spectrum column from the dump nearest the requested time."""
    name = min(manifest["spectra"],
               key=lambda n: abs(manifest["spectra"][n] - t_requested))
    assert abs(manifest["spectra"][name] - t_requested) < 1e-5
    with open(out_dir / name) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    return np.array([float(r[column]) for r in csv.DictReader(lines)])


def nodal_fields(path):
    """Snapshot CSV -> (t, x, fields dict)."""
    return read_snapshot_csv(path)


def euler_primitives(fields):
    rho = fields["rho"]
    u = fields["momentum"] / rho
    p = (GAS_GAMMA - 1.0) * (fields["energy"] - 0.5 * rho * u * u)
    return rho, u, p


def downward_crossing(x, values, level, lo, hi):
    """x where ``values`` first crosses below ``level`` inside [lo, hi]."""
    inside = (x >= lo) & (x <= hi)
    xs, vs = x[inside], values[inside]
    above = vs >= level
    idx = np.flatnonzero(above[:-1] & ~above[1:])
    if idx.size == 0:
        raise AssertionError(f"no downward crossing of {level} in [{lo}, {hi}]")
    i = int(idx[0])
    frac = (vs[i] - level) / (vs[i] - vs[i + 1])
    return float(xs[i] + frac * (xs[i + 1] - xs[i]))


# ---------------------------------------------------------------------------
# 1. Burgers pre-shock spectral accuracy
# ---------------------------------------------------------------------------

def test_criterion_01_preshock_spectral_accuracy(tmp_path):
    _, manifest, out = run_one("burgers-machine-precision", tmp_path)
    l1 = l1_table(out)[(615, 0.07, "u")]
    gate(1, manifest["blowup"] is None and l1 <= 1e-13,
         f"relaxed dlvp run, 615 points, t=0.07: L1 = {l1:.3e} (bound 1e-13)")


# ---------------------------------------------------------------------------
# 2. Burgers relaxation convergence table
# ---------------------------------------------------------------------------

# target L1(u) errors for the feko relaxation runs at (num_points, t),
# matched to within ±25%, plus the orders of the finest refinement step
TARGET_L1 = {
    (615, 0.07): 1.5e-4, (1599, 0.07): 4.5e-5, (2665, 0.07): 2.4e-5, (7995, 0.07): 5.8e-6,
    (615, 0.2): 4.6e-3, (1599, 0.2): 2.0e-3, (2665, 0.2): 1.3e-3, (7995, 0.2): 4.6e-4,
    (615, 2.0): 6.5e-4, (1599, 2.0): 2.8e-4, (2665, 2.0): 1.8e-4, (7995, 2.0): 6.5e-5,
}
TARGET_ORDER = {0.07: 1.28, 0.2: 0.91, 2.0: 0.90}


def test_criterion_02_convergence_table(tmp_path):
    resolutions = (615, 1599, 2665, 7995)
    results = run_recipe("burgers-convergence", tmp_path, values=resolutions)
    l1 = {}
    for config, manifest, out in results.values():
        assert manifest["blowup"] is None
        for (n, t, _), err in l1_table(out).items():
            l1[(n, t)] = err
    worst = max(abs(l1[key] / target - 1.0) for key, target in TARGET_L1.items())
    orders = {t: np.log(l1[(2665, t)] / l1[(7995, t)]) / np.log(7995 / 2665)
              for t in (0.07, 0.2, 2.0)}
    order_dev = max(abs(orders[t] - TARGET_ORDER[t]) for t in orders)
    gate(2, worst <= 0.25 and order_dev <= 0.08,
         f"12 errors within {worst * 100:.1f}% of targets (cap 25%); "
         f"orders {orders[0.07]:.3f}/{orders[0.2]:.3f}/{orders[2.0]:.3f} "
         f"vs 1.28/0.91/0.90 (max dev {order_dev:.3f}, cap 0.08)")


# ---------------------------------------------------------------------------
# 3. Energy conservation before the singularity
# ---------------------------------------------------------------------------

def test_criterion_03_preshock_energy_conservation(tmp_path):
    _, manifest, out = run_one("burgers-pps-smooth", tmp_path)
    assert manifest["blowup"] is None
    with open(out / "energy.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    series = np.array([float(r["energy_u"]) for r in rows])
    drift = float(np.max(np.abs(series - series[0])) / series[0])
    gate(3, drift < 1e-10,
         f"dealiased pseudospectral, 615 points, t<=0.14: "
         f"relative energy drift {drift:.3e} (bound 1e-10)")


# ---------------------------------------------------------------------------
# 4. Burgers singularity-time recovery
# ---------------------------------------------------------------------------

def test_criterion_04_singularity_time(tmp_path):
    _, manifest, out = run_one("burgers-delta", tmp_path)
    assert manifest["blowup"] is None
    rows = delta_table(out)
    usable = [(t, d) for t, d, flagged in rows if not flagged]
    (t1, d1), (t2, d2) = usable[-2:]
    # delta shrinks as (t*-t)^(3/2) close to the singularity, so the
    # intercept is extrapolated on the linearized series delta^(2/3)
    fit = fit_t_star([t1, t2], [d1, d2], power=1.5)
    target = 1.0 / (2.0 * np.pi)
    rel = abs(fit.t_star / target - 1.0)
    gate(4, rel <= 0.02,
         f"strip-width intercept from t={t1:g},{t2:g}: t* = {fit.t_star:.6f} "
         f"vs 1/(2*pi) = {target:.6f} ({rel * 100:.2f}%, cap 2%)")


# ---------------------------------------------------------------------------
# 5. Shifted-wave stability dichotomy
# ---------------------------------------------------------------------------

def test_criterion_05_stability_dichotomy(tmp_path):
    _, unstable, _ = run_one("burgers-shifted-unstable", tmp_path)
    _, dealiased, out_d = run_one("burgers-shifted-dealiased", tmp_path)
    _, raw, out_r = run_one("burgers-shifted-raw", tmp_path)
    blew = unstable["blowup"] is not None and unstable["blowup"]["t"] < 2.0
    l1_d = l1_table(out_d)[(615, 2.0, "u")]
    l1_r = l1_table(out_r)[(615, 2.0, "u")]
    ok_d = dealiased["blowup"] is None and abs(l1_d / 1.3e-3 - 1.0) <= 0.25
    ok_r = raw["blowup"] is None and abs(l1_r / 3.6e-3 - 1.0) <= 0.25
    t_blow = unstable["blowup"]["t"] if unstable["blowup"] else float("nan")
    gate(5, blew and ok_d and ok_r,
         f"raw a=0.97 blows up at t={t_blow:.3g}; dealiased a=0.97 "
         f"L1(2.0)={l1_d:.2e} (target 1.3e-3); raw a=1.18 L1(2.0)={l1_r:.2e} "
         f"(target 3.6e-3); both within 25%")


# ---------------------------------------------------------------------------
# 6. Sod shock tube: positivity, convergence, monotone capture
# ---------------------------------------------------------------------------

def test_criterion_06_sod_shock_tube(tmp_path):
    sweep = run_recipe("euler-sod-convergence", tmp_path)
    l1 = {}
    for config, manifest, out in sweep.values():
        assert manifest["blowup"] is None
        l1[config.num_points] = l1_table(out)[(config.num_points, 0.2, "rho")]
    monotone = l1[205] > l1[615] > l1[1599]

    _, manifest, out = run_one("euler-sod-sr-feko", tmp_path)
    assert manifest["blowup"] is None
    t, x, fields = nodal_fields(out / "snapshot_001.csv")
    rho, _, p = euler_primitives(fields)
    positive = float(rho.min()) > 0.0 and float(p.min()) > 0.0
    finite = bool(np.all(np.isfinite(rho)) and np.all(np.isfinite(p)))

    sol = solve_euler_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), gamma=GAS_GAMMA)
    contact_x = sol.u_star * t
    shock_x = sol.right_shock_speed * t
    checks = [
        ("contact rho", rho, contact_x, sol.rho_star_left, sol.rho_star_right),
        ("shock rho", rho, shock_x, sol.rho_star_right, 0.125),
        ("shock p", p, shock_x, sol.p_star, 0.1),
    ]
    ratios = {}
    for name, field, x_d, top, bot in checks:
        w = (x >= x_d - 0.15) & (x <= x_d + 0.15)
        overshoot = max(float(field[w].max() - top), float(bot - field[w].min()), 0.0)
        ratios[name] = overshoot / (top - bot)
    worst = max(ratios.values())
    gate(6, monotone and positive and finite and worst <= 0.02,
         f"L1(rho) {l1[205]:.2e} > {l1[615]:.2e} > {l1[1599]:.2e}; "
         f"min rho {rho.min():.3f}, min p {p.min():.3f}; worst jump "
         f"overshoot {worst * 100:.2f}% of amplitude (cap 2%)")


# ---------------------------------------------------------------------------
# 7. Blast-wave dichotomy
# ---------------------------------------------------------------------------

def test_criterion_07_blast_wave_dichotomy(tmp_path):
    _, dlvp, _ = run_one("euler-blast-sr-dlvp", tmp_path)
    positivity_loss = (dlvp["blowup"] is not None
                       and "node_index" in dlvp["blowup"]
                       and dlvp["blowup"]["t"] < 0.01)

    _, feko, out = run_one("euler-blast-sr-feko", tmp_path)  # the long run
    survived = feko["blowup"] is None and feko["t_final"] >= 0.032
    t, x, fields = nodal_fields(out / "snapshot_001.csv")
    rho, _, p = euler_primitives(fields)
    positive = float(rho.min()) > 0.0 and float(p.min()) > 0.0
    t_loss = dlvp["blowup"]["t"] if dlvp["blowup"] else float("nan")
    gate(7, positivity_loss and survived and positive,
         f"dlvp run loses positivity at t={t_loss:.3g} "
         f"({dlvp['blowup']['field'] if dlvp['blowup'] else '-'}); feko run "
         f"reaches t={feko['t_final']:.4f} with min rho {rho.min():.3f}, "
         f"min p {p.min():.2f}")


# ---------------------------------------------------------------------------
# 8. Dam break: convergence order and front positions
# ---------------------------------------------------------------------------

def test_criterion_08_dam_break(tmp_path):
    results = run_recipe("sw-dambreak-convergence", tmp_path)
    l1 = {}
    finest = None
    for config, manifest, out in results.values():
        assert manifest["blowup"] is None
        l1[config.num_points] = l1_table(out)[(config.num_points, 2.0, "h")]
        if config.num_points == 2665:
            finest = out
    seq = sorted(l1)
    orders = [float(np.log(l1[a] / l1[b]) / np.log(b / a))
              for a, b in zip(seq, seq[1:])]

    t, x, fields = nodal_fields(finest / "snapshot_000.csv")
    h = fields["h"]
    sol = solve_dam_break(3.0, 1.0, g=1.0)
    fan_level = 0.5 * (3.0 + sol.h_star)
    shock_level = 0.5 * (sol.h_star + 1.0)
    x_fine = np.linspace(-5.0, 5.0, 400001)
    h_exact = sol.sample_at(x_fine, t)[0]
    cell = float(x[1] - x[0])
    offsets = {}
    for name, level, lo, hi in (("fan", fan_level, -5.0, 0.0),
                                ("shock", shock_level, 0.0, 5.0)):
        x_num = downward_crossing(x, h, level, lo, hi)
        x_ref = downward_crossing(x_fine, h_exact, level, lo, hi)
        offsets[name] = abs(x_num - x_ref) / cell
    gate(8, min(orders) >= 0.4 and max(offsets.values()) <= 2.0,
         f"L1(h) orders {orders[0]:.2f}, {orders[1]:.2f} (floor 0.4); front "
         f"offsets fan {offsets['fan']:.2f}, shock {offsets['shock']:.2f} "
         f"cells (cap 2)")


# ---------------------------------------------------------------------------
# 9. Wall-model singularity tracking
# ---------------------------------------------------------------------------

HL_TIMES = (0.0012, 0.0016, 0.0020, 0.0024, 0.0028, 0.0030, 0.0032, 0.0034)
HL_T_STAR = 0.0035056
HL_K_MIN = 142  # lower window edge of the coarse run's kernel plateau fit


def hl_tail_fit(power):
    """Prefactor-corrected tail fit on the populated (even) mode lattice."""
    spec = KernelSpec("dlvp", alpha=1.6, gamma=0.99, r=0.92)
    k_max = plateau_end(kernel_coeffs(spec, power.size - 1))
    return fit_delta(power, HL_K_MIN, k_max, algebraic_term=True, stride=2)


def test_criterion_09_wall_model_singularity(tmp_path):
    _, sr_lo, out_lo = run_one("hl-delta-2665", tmp_path)
    _, sr_hi, out_hi = run_one("hl-delta-7995", tmp_path)
    _, pps, out_pps = run_one("hl-pps-2665", tmp_path)
    assert sr_lo["blowup"] is None and sr_hi["blowup"] is None and pps["blowup"] is None

    # (a) delta(t) agreement across resolutions on validity-flagged fits
    diffs = {}
    for t in HL_TIMES:
        fits = []
        for manifest, out in ((sr_lo, out_lo), (sr_hi, out_hi)):
            try:
                fits.append(hl_tail_fit(spectrum_at(manifest, out, t, "power_u")))
            except FitError:
                fits.append(None)
        if all(f is not None and not f.flagged for f in fits):
            diffs[t] = abs(fits[0].delta / fits[1].delta - 1.0)
    agreement = len(diffs) >= 3 and max(diffs.values()) <= 0.10

    # (b) intercept extrapolation of the fine run's slope-fit series
    usable = [(t, d) for t, d, flagged in delta_table(out_hi) if not flagged]
    (t1, d1), (t2, d2) = usable[-2:]
    fit = fit_t_star([t1, t2], [d1, d2], power=1.0)
    t_star_rel = abs(fit.t_star / HL_T_STAR - 1.0)

    # (c) usable exponential range: relaxed tail vs dealiased control
    k_sr = usable_fit_range(spectrum_at(sr_lo, out_lo, 0.0030, "power_u"),
                            k_min=HL_K_MIN, stride=2)
    k_pps = usable_fit_range(spectrum_at(pps, out_pps, 0.0030, "power_u"),
                             k_min=HL_K_MIN, stride=2)
    ratio = k_sr / k_pps
    gate(9, agreement and t_star_rel <= 0.05 and ratio >= 1.3,
         f"delta agreement at {len(diffs)} times, worst "
         f"{max(diffs.values()) * 100:.2f}% (cap 10%); t* = {fit.t_star:.7f} "
         f"({t_star_rel * 100:.2f}% of {HL_T_STAR}, cap 5%); usable range "
         f"{k_sr}/{k_pps} = {ratio:.2f}x (floor 1.3x)")


# ---------------------------------------------------------------------------
# 10. Kernel property suite
# ---------------------------------------------------------------------------

def test_criterion_10_kernel_properties():
    # unit mean for every family across resolutions
    unit_mean = True
    for family in FAMILIES:
        for n in (64, 307, 1332):
            spec = KernelSpec(family, alpha=1.0, gamma=0.99)
            unit_mean &= kernel_coeffs(spec, n)[0] == 1.0

    # real-space positivity of the complete positive kernels
    theta = 2.0 * np.pi * np.arange(4096) / 4096
    worst_min = 0.0
    supports_exact = True
    positive_support = {"feko": lambda m: m,
                        "jackson": lambda m: 2 * m - 2,
                        "jdlvp": lambda m: 2 * m - 1}
    for family, support in positive_support.items():
        for m in (8, 33, 128):
            profile = positive_kernel_profile(family, m)
            k = np.arange(1, profile.size)
            synthesis = profile[0] + 2.0 * (profile[1:, None]
                                            * np.cos(np.outer(k, theta))).sum(axis=0)
            worst_min = min(worst_min, float(synthesis.min()))
            edge = support(m)
            extended = positive_kernel_profile(family, m, k_max=edge + 8)
            supports_exact &= bool(np.all(extended[edge + 1:] == 0.0)
                                   and extended[edge] != 0.0)

    q = svv_q_coeffs(307, 35.0)
    svv_ok = q[307] == 1.0 and bool(np.all(q[: 35 + 1] == 0.0))
    gate(10, unit_mean and worst_min >= -1e-10 and supports_exact and svv_ok,
         f"unit mean for {len(FAMILIES)} families; positive-kernel synthesis "
         f"min {worst_min:.2e} (floor -1e-10); support edges exact; "
         f"viscosity profile endpoints exact")


# ---------------------------------------------------------------------------
# 11. Scheme-reduction identities
# ---------------------------------------------------------------------------

def test_criterion_11_reduction_identities():
    spec = problem("burgers-ic0")
    grid = make_problem_grid(spec, 129)
    model = make_model(spec, grid, dealias=False)
    state = spec.initial_state(model, grid)
    dt = 1e-4
    steps = 100

    def final(scheme):
        result = run(model, state, scheme, t_end=steps * dt)
        assert result.steps == steps
        return model.nodal_components(result.state)

    baseline = final(SchemeConfig(kind="pps", dt=dt, dealias=False))
    identity = KernelSpec("dirichlet", alpha=1.0, gamma=0.99)
    reductions = {
        "relaxation with unit kernel":
            SchemeConfig(kind="sr", kernel=identity, dt=dt, dealias=False),
        "purging with unit kernel":
            SchemeConfig(kind="sp", kernel=identity, dt=dt, dealias=False),
        "viscosity with zero amplitude":
            SchemeConfig(kind="svv", svv_eps=0.0, dt=dt, dealias=False),
    }
    deviations = {name: float(np.max(np.abs(final(scheme) - baseline)))
                  for name, scheme in reductions.items()}
    worst = max(deviations.values())
    gate(11, worst <= 1e-14,
         f"identity-kernel relaxation/purging and zero-amplitude viscosity "
         f"match the plain trajectory to {worst:.2e} over {steps} steps "
         f"(cap 1e-14)")
