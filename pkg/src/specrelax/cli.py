"""Command-line interface.

Subcommands
-----------
run           execute one experiment from a config file or named recipe
sweep         expand a [sweep] section and run its members in parallel
oracle        write a reference solution (closed-form or finite-volume) as CSV
kernel-dump   write a kernel's spectral multiplier profile as CSV
list-recipes  show the built-in experiment recipes

Exit status: 0 on success, 2 on configuration/usage errors, 3 when a run
terminates in a blowup (the diagnostic is in the manifest).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .analysis import FLOAT_FMT, convergence_table, write_snapshot_csv
from .config import (
    ExperimentConfig,
    ReferenceConfig,
    expand_sweep,
    load_raw,
    parse_config,
)
from .errors import ConfigError, OracleError
from .experiments import Reference, execute
from .kernels import KernelParameterError, KernelSpec, kernel_coeffs
from .models import make_model, make_problem_grid, problem
from .recipes import recipe, recipe_descriptions
from .schemes import SchemeConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BLOWUP = 3


def _load_raw_config(args) -> dict:
    if bool(args.config) == bool(args.recipe):
        raise ConfigError("give exactly one of --config FILE or --recipe NAME")
    if args.config:
        return load_raw(args.config)
    return recipe(args.recipe)


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    data = _load_raw_config(args)
    members = expand_sweep(data)
    if len(members) > 1:
        raise ConfigError(
            f"config expands to {len(members)} runs; use the sweep command")
    config = members[0]
    out_dir = Path(args.out) if args.out else Path("runs") / config.name
    manifest = execute(config, out_dir, raw_config=data)
    if manifest["blowup"]:
        info = manifest["blowup"]
        print(f"{config.name}: blowup at t = {info['t']:.6g} "
              f"(step {info['step']}): {info['message']}")
        print(f"artifacts: {out_dir}")
        return EXIT_BLOWUP
    print(f"{config.name}: reached t = {manifest['t_final']:.6g} "
          f"in {manifest['steps']} steps ({manifest['wall_time_s']:.2f} s)")
    print(f"artifacts: {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_member(payload) -> dict:
    """Run one sweep member; never raise, so sibling members proceed."""
    config, out_dir = payload
    try:
        manifest = execute(config, out_dir)
    except Exception as err:  # reported as a failed row, others continue
        return {"status": "error", "error": f"{type(err).__name__}: {err}"}
    return {"status": "blowup" if manifest["blowup"] else "ok",
            "manifest": manifest}


def _member_error_rows(err_path: Path) -> list[dict]:
    if not err_path.exists():
        return []
    with open(err_path, newline="") as fh:
        return list(csv.DictReader(fh))


def _attach_orders(table: list[dict], short: str) -> None:
    """Fill the order column of a resolution sweep from successive L1 ratios."""
    groups: dict[tuple, list[dict]] = {}
    for row in table:
        if row["l1"] == "":
            continue
        groups.setdefault((row["t"], row["component"]), []).append(row)
    for rows in groups.values():
        rows.sort(key=lambda r: int(r[short]))
        conv = convergence_table([int(r[short]) for r in rows],
                                 [float(r["l1"]) for r in rows])
        for row, entry in zip(rows, conv):
            if entry.order is not None:
                row["order"] = FLOAT_FMT % entry.order


def cmd_sweep(args) -> int:
    data = _load_raw_config(args)
    if "sweep" not in data:
        raise ConfigError("sweep needs a [sweep] section (parameter + values)")
    parameter = str(data["sweep"].get("parameter", ""))
    values = list(data["sweep"].get("values", []))
    members = expand_sweep(data)
    base = parse_config({k: v for k, v in data.items() if k != "sweep"})
    out_root = Path(args.out) if args.out else Path("runs") / base.name
    out_root.mkdir(parents=True, exist_ok=True)

    payloads = [(config, out_root / config.name) for config in members]
    jobs = args.jobs or min(len(members), os.cpu_count() or 1)
    if jobs <= 1:
        outcomes = [_sweep_member(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_sweep_member, payloads))

    short = parameter.rsplit(".", 1)[1]
    header = [short, "t", "component", "l1", "l2", "linf", "order", "status"]
    table: list[dict] = []
    failures = 0
    for value, config, outcome in zip(values, members, outcomes):
        status = outcome["status"]
        if status != "ok":
            failures += 1
        rows = []
        if status != "error":
            rows = _member_error_rows(out_root / config.name / "errors.csv")
        if rows:
            for row in rows:
                table.append({short: f"{value:g}" if isinstance(value, float) else str(value),
                              "t": row["t"], "component": row["component"],
                              "l1": row["l1"], "l2": row["l2"], "linf": row["linf"],
                              "order": "", "status": status})
        else:
            table.append({short: f"{value:g}" if isinstance(value, float) else str(value),
                          "t": "", "component": "", "l1": "", "l2": "", "linf": "",
                          "order": "", "status": status})
    if short == "num_points":
        _attach_orders(table, short)

    sweep_csv = out_root / "sweep.csv"
    with open(sweep_csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header)
        writer.writeheader()
        writer.writerows(table)

    member_summary = {}
    for config, outcome in zip(members, outcomes):
        entry = {"dir": config.name, "status": outcome["status"]}
        if outcome["status"] == "error":
            entry["error"] = outcome["error"]
        elif outcome["status"] == "blowup":
            entry["blowup"] = outcome["manifest"]["blowup"]
        member_summary[config.name] = entry
    sweep_manifest = {
        "parameter": parameter,
        "values": values,
        "jobs": jobs,
        "config": data,
        "members": member_summary,
        "outputs": {sweep_csv.name:
                    hashlib.sha256(sweep_csv.read_bytes()).hexdigest()},
    }
    with open(out_root / "sweep_manifest.json", "w") as fh:
        json.dump(sweep_manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for name, entry in sorted(member_summary.items()):
        print(f"{name}: {entry['status']}")
    print(f"aggregated table: {sweep_csv}")
    return EXIT_BLOWUP if failures else EXIT_OK


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    spec = problem(args.problem)
    reference_cfg = ReferenceConfig(kind=args.kind, cells=args.cells)
    config = ExperimentConfig(
        name="oracle", problem=spec, num_points=args.points, kosloff_beta=0.999,
        scheme=SchemeConfig(kind="pps"), t_end=max(float(args.t), 1e-9),
        reference=reference_cfg)
    grid = make_problem_grid(spec, args.points)
    model = make_model(spec, grid)
    fields = Reference(config, grid, model).fields(float(args.t))
    out = Path(args.out) if args.out else Path(
        f"{spec.name.replace(':', '-')}_reference_t{float(args.t):g}.csv")
    write_snapshot_csv(out, grid.x, fields, time=float(args.t))
    print(f"wrote {out} ({args.points} points, t = {float(args.t):g})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# kernel-dump
# ---------------------------------------------------------------------------

def cmd_kernel_dump(args) -> int:
    spec = KernelSpec(args.family, alpha=args.alpha, gamma=args.gamma,
                      r=args.r, mmo_beta=args.mmo_beta, mmo_p=args.mmo_p)
    multipliers = kernel_coeffs(spec, args.modes)
    params = spec.params(args.modes)
    out = Path(args.out) if args.out else Path(f"kernel_{spec.family}_{args.modes}.csv")
    with open(out, "w", newline="") as fh:
        fh.write(f"# family = {spec.family}, N = {args.modes}, "
                 f"m = {FLOAT_FMT % params.m}, tau = {FLOAT_FMT % params.tau}\n")
        writer = csv.writer(fh)
        writer.writerow(["k", "multiplier"])
        for k, value in enumerate(multipliers):
            writer.writerow([k, FLOAT_FMT % value])
    print(f"wrote {out} ({spec.family}, {args.modes + 1} modes)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# list-recipes
# ---------------------------------------------------------------------------

def cmd_list_recipes(args) -> int:
    pairs = recipe_descriptions()
    width = max(len(name) for name, _ in pairs)
    for name, description in pairs:
        print(f"{name:<{width}}  {description}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specrelax",
        description="Pseudospectral solvers for 1D conservation laws with "
                    "spectral relaxation, purging, and vanishing viscosity.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one experiment")
    run_p.add_argument("--config", help="TOML experiment description")
    run_p.add_argument("--recipe", help="name of a built-in recipe")
    run_p.add_argument("--out", help="output directory (default runs/<name>)")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a parameter sweep")
    sweep_p.add_argument("--config", help="TOML experiment description with [sweep]")
    sweep_p.add_argument("--recipe", help="name of a built-in sweep recipe")
    sweep_p.add_argument("--out", help="output directory (default runs/<name>)")
    sweep_p.add_argument("--jobs", type=int, default=0,
                         help="parallel workers (default: one per member, "
                              "capped at the CPU count)")
    sweep_p.set_defaults(func=cmd_sweep)

    oracle_p = sub.add_parser("oracle", help="write a reference solution CSV")
    oracle_p.add_argument("--problem", required=True, help="built-in problem name")
    oracle_p.add_argument("--t", required=True, type=float, help="evaluation time")
    oracle_p.add_argument("--points", type=int, default=2001,
                          help="sample count (odd for periodic problems)")
    oracle_p.add_argument("--kind", choices=("oracle", "fv"), default="oracle",
                          help="closed-form solution or finite-volume run")
    oracle_p.add_argument("--cells", type=int, default=8000,
                          help="finite-volume cells (kind=fv)")
    oracle_p.add_argument("--out", help="output CSV path")
    oracle_p.set_defaults(func=cmd_oracle)

    kd = sub.add_parser("kernel-dump", help="write a kernel multiplier profile CSV")
    kd.add_argument("--family", required=True,
                    help="kernel family (e.g. feko, jackson, dlvp, tt05)")
    kd.add_argument("--modes", type=int, default=512, help="max mode number N")
    kd.add_argument("--alpha", type=float, default=1.0)
    kd.add_argument("--gamma", type=float, default=0.99)
    kd.add_argument("--r", type=float, default=0.5)
    kd.add_argument("--mmo-beta", dest="mmo_beta", type=float, default=2.5)
    kd.add_argument("--mmo-p", dest="mmo_p", type=int, default=1)
    kd.add_argument("--out", help="output CSV path")
    kd.set_defaults(func=cmd_kernel_dump)

    lr = sub.add_parser("list-recipes", help="show the built-in recipes")
    lr.set_defaults(func=cmd_list_recipes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OracleError, KernelParameterError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
