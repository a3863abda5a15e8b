"""Named, ready-to-run experiment configurations.

Each recipe is a raw config mapping in the same schema as a TOML config
file (see config.py), so ``--recipe NAME`` and ``--config FILE`` follow
the identical validation path.  Recipes with a [sweep] section run as
multi-member sweeps; the rest are single experiments.
"""

from __future__ import annotations

import copy

from .errors import ConfigError

_GAS_SNAP = [0.2, 0.4]

RECIPES: dict[str, dict] = {
    # -- Burgers, smooth-regime accuracy and convergence ---------------------
    "burgers-machine-precision": {
        "description": "SR-DLVP (0.89, 0.9) on the sine IC before the shock: "
                       "errors at the rounding floor.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-machine-precision"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 0.89, "gamma": 0.9,
                       "dt": 1e-5},
            "time": {"t_end": 0.07, "snapshots": [0.07]},
            "reference": {"kind": "oracle"},
        },
    },
    "burgers-convergence": {
        "description": "SR-FeKo (0.7, 0.99) resolution sweep with L1/L2/Linf "
                       "errors before, at, and long after shock formation.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-convergence"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.7, "gamma": 0.99},
            "time": {"t_end": 2.0, "snapshots": [0.07, 0.2, 2.0]},
            "reference": {"kind": "oracle"},
            "sweep": {"parameter": "grid.num_points",
                      "values": [39, 65, 123, 205, 615, 1599, 2665, 7995]},
        },
    },
    "burgers-pps-smooth": {
        "description": "Dealiased pure pseudospectral run in the smooth regime "
                       "with per-step energy tracking.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-pps-smooth"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "pps", "dealias": True},
            "time": {"t_end": 0.14, "snapshots": [0.07, 0.14], "energy": True},
            "reference": {"kind": "oracle"},
        },
    },
    "burgers-delta": {
        "description": "Analyticity-strip width delta(t) from dealiased PPS "
                       "spectra while the solution is still smooth.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-delta"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "pps", "dealias": True},
            "time": {"t_end": 0.12,
                     "spectra": [0.03, 0.035, 0.04, 0.045, 0.05, 0.055,
                                 0.06, 0.065, 0.07, 0.075, 0.08, 0.085,
                                 0.09, 0.095, 0.10, 0.105, 0.11, 0.115, 0.12]},
            "fit": {"enabled": True, "algebraic_term": False},
        },
    },
    "burgers-sp": {
        "description": "Spectral purging with the Fejér–Korovkin kernel on the "
                       "sine IC, long past shock formation.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-sp"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sp", "kernel": "feko", "alpha": 0.7, "gamma": 0.99},
            "time": {"t_end": 2.0, "snapshots": [0.2, 2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    "burgers-svv": {
        "description": "Spectral vanishing viscosity with default strength and "
                       "cutoff on the sine IC.",
        "config": {
            "experiment": {"problem": "burgers-ic0", "name": "burgers-svv"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "svv"},
            "time": {"t_end": 2.0, "snapshots": [0.2, 2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    # -- Burgers, shifted IC: dealiasing decides stability --------------------
    "burgers-shifted-dealiased": {
        "description": "Shifted sine with SR-FeKo (0.97, 0.98) and dealiasing: "
                       "stable long-time run.",
        "config": {
            "experiment": {"problem": "burgers-ic1", "name": "burgers-shifted-dealiased"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.97, "gamma": 0.98,
                       "dealias": True},
            "time": {"t_end": 2.0, "snapshots": [2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    "burgers-shifted-unstable": {
        "description": "Same parameters without dealiasing: documents the "
                       "aliasing-driven blowup as a first-class outcome.",
        "config": {
            "experiment": {"problem": "burgers-ic1", "name": "burgers-shifted-unstable"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.97, "gamma": 0.98,
                       "dealias": False},
            "time": {"t_end": 2.0, "snapshots": [2.0]},
        },
    },
    "burgers-shifted-raw": {
        "description": "Shifted sine without dealiasing at the stronger "
                       "relaxation (1.18, 0.99) that stays stable.",
        "config": {
            "experiment": {"problem": "burgers-ic1", "name": "burgers-shifted-raw"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 1.18, "gamma": 0.99,
                       "dealias": False},
            "time": {"t_end": 2.0, "snapshots": [2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    # -- Shallow water ---------------------------------------------------------
    "sw-hump-sr-feko": {
        "description": "Smooth water hump with SR-FeKo (0.5, 0.99); shocks "
                       "form around t = 3.",
        "config": {
            "experiment": {"problem": "sw-hump", "name": "sw-hump-sr-feko"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.5, "gamma": 0.99},
            "time": {"t_end": 4.0, "snapshots": [1.0, 2.0, 3.0, 4.0]},
            "reference": {"kind": "fv", "cells": 4000},
        },
    },
    "sw-hump-sr-dlvp": {
        "description": "Water hump with the de la Vallée Poussin style kernel "
                       "(0.8225, 0.98).",
        "config": {
            "experiment": {"problem": "sw-hump", "name": "sw-hump-sr-dlvp"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 0.8225, "gamma": 0.98},
            "time": {"t_end": 4.0, "snapshots": [1.0, 2.0, 3.0, 4.0]},
            "reference": {"kind": "fv", "cells": 4000},
        },
    },
    "sw-dambreak-sr-feko": {
        "description": "Mirror-extended dam break with SR-FeKo (0.55, 0.99), "
                       "errors against the exact similarity solution.",
        "config": {
            "experiment": {"problem": "sw-dambreak", "name": "sw-dambreak-sr-feko"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.55, "gamma": 0.99},
            "time": {"t_end": 2.0, "snapshots": [1.0, 2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    "sw-dambreak-sr-dlvp": {
        "description": "Dam break with the plateau kernel (0.70, 0.98).",
        "config": {
            "experiment": {"problem": "sw-dambreak", "name": "sw-dambreak-sr-dlvp"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 0.70, "gamma": 0.98},
            "time": {"t_end": 2.0, "snapshots": [1.0, 2.0]},
            "reference": {"kind": "oracle"},
        },
    },
    "sw-dambreak-convergence": {
        "description": "Dam-break resolution sweep for the measured L1(h) "
                       "convergence order.",
        "config": {
            "experiment": {"problem": "sw-dambreak", "name": "sw-dambreak-convergence"},
            "grid": {"num_points": 615},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.55, "gamma": 0.99},
            "time": {"t_end": 2.0, "snapshots": [2.0]},
            "reference": {"kind": "oracle"},
            "sweep": {"parameter": "grid.num_points", "values": [615, 1599, 2665]},
        },
    },
    # -- Compressible gas dynamics ---------------------------------------------
    "euler-sod-sr-feko": {
        "description": "Sod shock tube with SR-FeKo (0.785, 0.99) between "
                       "reflecting walls.",
        "config": {
            "experiment": {"problem": "euler-sod", "name": "euler-sod-sr-feko"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.785, "gamma": 0.99},
            "time": {"t_end": 0.4, "snapshots": _GAS_SNAP},
            "reference": {"kind": "oracle"},
        },
    },
    "euler-sod-sr-dlvp": {
        "description": "Sod shock tube with the plateau kernel (0.94, 0.95).",
        "config": {
            "experiment": {"problem": "euler-sod", "name": "euler-sod-sr-dlvp"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 0.94, "gamma": 0.95},
            "time": {"t_end": 0.4, "snapshots": _GAS_SNAP},
            "reference": {"kind": "oracle"},
        },
    },
    "euler-sod-convergence": {
        "description": "Sod resolution sweep for the monotone L1 density "
                       "error decrease.",
        "config": {
            "experiment": {"problem": "euler-sod", "name": "euler-sod-convergence"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.785, "gamma": 0.99},
            "time": {"t_end": 0.2, "snapshots": [0.2]},
            "reference": {"kind": "oracle"},
            "sweep": {"parameter": "grid.num_points", "values": [205, 615, 1599]},
        },
    },
    "euler-lax-sr-feko": {
        "description": "Lax shock tube with SR-FeKo (0.91, 0.99).",
        "config": {
            "experiment": {"problem": "euler-lax", "name": "euler-lax-sr-feko"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.91, "gamma": 0.99},
            "time": {"t_end": 0.26, "snapshots": [0.13, 0.26]},
            "reference": {"kind": "oracle"},
        },
    },
    "euler-lax-sr-dlvp": {
        "description": "Lax shock tube with the plateau kernel (1.10, 0.98).",
        "config": {
            "experiment": {"problem": "euler-lax", "name": "euler-lax-sr-dlvp"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 1.10, "gamma": 0.98},
            "time": {"t_end": 0.26, "snapshots": [0.13, 0.26]},
            "reference": {"kind": "oracle"},
        },
    },
    "euler-shuosher-sr-feko": {
        "description": "Mach-3 shock/entropy-wave interaction with SR-FeKo "
                       "(0.95, 0.97); finite-volume reference.",
        "config": {
            "experiment": {"problem": "euler-shuosher", "name": "euler-shuosher-sr-feko"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 0.95, "gamma": 0.97},
            "time": {"t_end": 0.36, "snapshots": [0.18, 0.36]},
            "reference": {"kind": "fv", "cells": 8000},
        },
    },
    "euler-shuosher-sr-dlvp": {
        "description": "Shock/entropy-wave interaction with the plateau kernel "
                       "(1.14, 0.95).",
        "config": {
            "experiment": {"problem": "euler-shuosher", "name": "euler-shuosher-sr-dlvp"},
            "grid": {"num_points": 615, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 1.14, "gamma": 0.95},
            "time": {"t_end": 0.36, "snapshots": [0.18, 0.36]},
            "reference": {"kind": "fv", "cells": 8000},
        },
    },
    "euler-blast-sr-feko": {
        "description": "Interacting blast waves with SR-FeKo (1.35, 0.99): "
                       "stable through the collision. Long run.",
        "config": {
            "experiment": {"problem": "euler-blast", "name": "euler-blast-sr-feko"},
            "grid": {"num_points": 1599, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "feko", "alpha": 1.35, "gamma": 0.99},
            "time": {"t_end": 0.032, "snapshots": [0.016, 0.032]},
            "reference": {"kind": "fv", "cells": 8000},
        },
    },
    "euler-blast-sr-dlvp": {
        "description": "Blast waves with the plateau kernel: documents the "
                       "positivity-loss failure as a first-class outcome.",
        "config": {
            "experiment": {"problem": "euler-blast", "name": "euler-blast-sr-dlvp"},
            "grid": {"num_points": 1599, "kosloff_beta": 0.999},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 1.35, "gamma": 0.99},
            "time": {"t_end": 0.032, "snapshots": [0.016, 0.032]},
        },
    },
    # -- Wall model: singularity tracking ---------------------------------------
    "hl-delta-2665": {
        "description": "Wall-model run with SR-DLVP (1.6, 0.99, r=0.92) and "
                       "delta(t) extraction near the blowup time.",
        "config": {
            "experiment": {"problem": "hl-default", "name": "hl-delta-2665"},
            "grid": {"num_points": 2665},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 1.6, "gamma": 0.99,
                       "r": 0.92, "dt": 3e-7},
            "time": {"t_end": 0.0034,
                     "spectra": [0.0012, 0.0016, 0.0020, 0.0024, 0.0028,
                                 0.0030, 0.0032, 0.0034]},
            "fit": {"enabled": True, "component": 0, "stride": 2},
        },
    },
    "hl-delta-7995": {
        "description": "High-resolution wall-model delta(t) run for the "
                       "singularity-time extrapolation. Long run.",
        "config": {
            "experiment": {"problem": "hl-default", "name": "hl-delta-7995"},
            "grid": {"num_points": 7995},
            "scheme": {"kind": "sr", "kernel": "dlvp", "alpha": 1.6, "gamma": 0.99,
                       "r": 0.92, "dt": 1e-7},
            "time": {"t_end": 0.0034,
                     "spectra": [0.0012, 0.0016, 0.0020, 0.0024, 0.0028,
                                 0.0030, 0.0032, 0.0034]},
            "fit": {"enabled": True, "component": 0, "stride": 2},
        },
    },
    "hl-pps-2665": {
        "description": "Dealiased pure pseudospectral wall-model run: the "
                       "baseline whose usable spectral fit range the "
                       "relaxation run extends.",
        "config": {
            "experiment": {"problem": "hl-default", "name": "hl-pps-2665"},
            "grid": {"num_points": 2665},
            "scheme": {"kind": "pps", "dealias": True, "dt": 3e-7},
            "time": {"t_end": 0.0034,
                     "spectra": [0.0012, 0.0016, 0.0020, 0.0024, 0.0028,
                                 0.0030, 0.0032, 0.0034]},
            "fit": {"enabled": True, "component": 0, "stride": 2},
        },
    },
}


def recipe(name: str) -> dict:
    """Deep copy of a named recipe's raw config mapping."""
    key = str(name).strip().lower()
    if key not in RECIPES:
        raise ConfigError(f"unknown recipe {name!r}; see list-recipes")
    return copy.deepcopy(RECIPES[key]["config"])


def recipe_descriptions() -> list[tuple[str, str]]:
    """(name, one-line description) pairs, sorted by name."""
    return [(name, RECIPES[name]["description"]) for name in sorted(RECIPES)]
