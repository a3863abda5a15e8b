"""End-to-end command-line tests: exit codes, artifacts, determinism."""

import csv
import hashlib
import json

import numpy as np
import pytest

from specrelax.analysis import read_snapshot_csv
from specrelax.cli import main
from specrelax.kernels import KernelSpec, kernel_coeffs
from specrelax.oracles import exact_burgers

BASE = """
[experiment]
name = "smoke"
problem = "burgers-ic0"

[grid]
num_points = 65

[time]
t_end = 0.05

[reference]
kind = "oracle"
"""


def write_config(tmp_path, text=BASE, name="exp.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def load_manifest(out_dir):
    with open(out_dir / "manifest.json") as fh:
        return json.load(fh)


class TestRun:
    def test_smoke_run(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "smoke: reached t = " in stdout
        manifest = load_manifest(out)
        assert manifest["name"] == "smoke"
        assert manifest["blowup"] is None
        assert manifest["steps"] > 0
        assert manifest["t_final"] >= 0.05
        # the final time is always snapshotted, at the nearest completed step
        assert list(manifest["snapshots"]) == ["snapshot_000.csv"]
        t_snap = manifest["snapshots"]["snapshot_000.csv"]
        assert abs(t_snap - 0.05) <= manifest["dt"]
        t, x, fields = read_snapshot_csv(out / "snapshot_000.csv")
        assert t == t_snap
        assert x.size == 65
        assert list(fields) == ["u"]
        # reference comparison produced one row (one component, one time)
        with open(out / "errors.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert rows[0]["component"] == "u"
        assert float(rows[0]["l1"]) < 1e-6

    def test_output_hashes_match_files(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        main(["run", "--config", str(cfg), "--out", str(out)])
        manifest = load_manifest(out)
        assert set(manifest["outputs"]) == {"snapshot_000.csv", "errors.csv"}
        for name, digest in manifest["outputs"].items():
            assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", str(cfg), "--out", str(a)])
        main(["run", "--config", str(cfg), "--out", str(b)])
        for name in load_manifest(a)["outputs"]:
            assert (a / name).read_bytes() == (b / name).read_bytes()
        assert load_manifest(a)["outputs"] == load_manifest(b)["outputs"]

    def test_manifest_echoes_raw_config(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        main(["run", "--config", str(cfg), "--out", str(out)])
        manifest = load_manifest(out)
        assert manifest["config"]["experiment"]["problem"] == "burgers-ic0"
        assert manifest["config"]["grid"]["num_points"] == 65
        assert manifest["config"]["reference"]["kind"] == "oracle"

    def test_blowup_exit_code(self, tmp_path, capsys):
        text = BASE.replace('t_end = 0.05', 't_end = 0.5') + \
            '\n[scheme]\nkind = "pps"\ndt = 0.05\n'
        cfg = write_config(tmp_path, text)
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 3
        assert "blowup at t =" in capsys.readouterr().out
        manifest = load_manifest(out)
        assert manifest["blowup"] is not None
        assert manifest["blowup"]["step"] >= 0
        assert manifest["t_final"] < 0.5

    def test_usage_errors(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        assert main(["run"]) == 2
        assert main(["run", "--config", str(cfg), "--recipe", "x"]) == 2
        assert main(["run", "--recipe", "no-such-recipe"]) == 2
        assert main(["run", "--config", str(tmp_path / "missing.toml")]) == 2
        err = capsys.readouterr().err
        assert "error:" in err

    def test_run_rejects_sweep_recipe(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--recipe", "burgers-convergence",
                     "--out", str(out)]) == 2
        assert "use the sweep command" in capsys.readouterr().err


SWEEP = BASE + """
[sweep]
parameter = "grid.num_points"
values = [33, 65]
"""


class TestSweep:
    def test_resolution_sweep_serial(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SWEEP)
        out = tmp_path / "sweep"
        assert main(["sweep", "--config", str(cfg), "--out", str(out),
                     "--jobs", "1"]) == 0
        stdout = capsys.readouterr().out
        assert "smoke-num_points-33: ok" in stdout
        assert "smoke-num_points-65: ok" in stdout
        with open(out / "sweep.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["num_points"] for r in rows] == ["33", "65"]
        assert all(r["status"] == "ok" for r in rows)
        # refinement order is attached to the finer member
        assert rows[0]["order"] == ""
        assert float(rows[1]["order"]) > 1.0
        assert float(rows[1]["l1"]) < float(rows[0]["l1"])
        # each member directory holds a complete run
        for name in ("smoke-num_points-33", "smoke-num_points-65"):
            assert (out / name / "manifest.json").exists()
            assert (out / name / "errors.csv").exists()

    def test_sweep_manifest(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP)
        out = tmp_path / "sweep"
        main(["sweep", "--config", str(cfg), "--out", str(out), "--jobs", "1"])
        with open(out / "sweep_manifest.json") as fh:
            manifest = json.load(fh)
        assert manifest["parameter"] == "grid.num_points"
        assert manifest["values"] == [33, 65]
        assert manifest["jobs"] == 1
        assert set(manifest["members"]) == {"smoke-num_points-33",
                                            "smoke-num_points-65"}
        assert all(m["status"] == "ok" for m in manifest["members"].values())
        digest = hashlib.sha256((out / "sweep.csv").read_bytes()).hexdigest()
        assert manifest["outputs"]["sweep.csv"] == digest

    def test_parallel_matches_serial(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP)
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert main(["sweep", "--config", str(cfg), "--out", str(serial),
                     "--jobs", "1"]) == 0
        assert main(["sweep", "--config", str(cfg), "--out", str(parallel)]) == 0
        assert (serial / "sweep.csv").read_bytes() == \
            (parallel / "sweep.csv").read_bytes()

    def test_blowup_member_reported(self, tmp_path):
        # dt = 0.05 is far beyond the CFL limit: the short member finishes in
        # one step, the long one goes non-finite along the way
        text = BASE + """
[scheme]
kind = "pps"
dt = 0.05

[sweep]
parameter = "time.t_end"
values = [0.05, 0.5]
"""
        cfg = write_config(tmp_path, text)
        out = tmp_path / "sweep"
        assert main(["sweep", "--config", str(cfg), "--out", str(out),
                     "--jobs", "1"]) == 3
        with open(out / "sweep.csv", newline="") as fh:
            rows = {r["t_end"]: r["status"] for r in csv.DictReader(fh)}
        assert rows["0.05"] == "ok"
        assert rows["0.5"] == "blowup"
        with open(out / "sweep_manifest.json") as fh:
            manifest = json.load(fh)
        failed = manifest["members"]["smoke-t_end-0.5"]
        assert failed["status"] == "blowup"
        assert failed["blowup"]["t"] <= 0.5

    def test_sweep_requires_section(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        assert main(["sweep", "--config", str(cfg)]) == 2
        assert "[sweep] section" in capsys.readouterr().err


class TestOracle:
    def test_writes_reference_csv(self, tmp_path):
        out = tmp_path / "ref.csv"
        assert main(["oracle", "--problem", "burgers-ic0", "--t", "0.05",
                     "--points", "101", "--out", str(out)]) == 0
        t, x, fields = read_snapshot_csv(out)
        assert t == 0.05
        assert x.size == 101
        np.testing.assert_allclose(fields["u"], exact_burgers(x, 0.05, "ic0"),
                                   rtol=0, atol=1e-12)

    def test_unknown_problem(self, capsys):
        assert main(["oracle", "--problem", "kdv", "--t", "0.1"]) == 2
        assert "error:" in capsys.readouterr().err


class TestKernelDump:
    def test_profile_matches_kernel_coeffs(self, tmp_path):
        out = tmp_path / "kernel.csv"
        assert main(["kernel-dump", "--family", "feko", "--modes", "64",
                     "--alpha", "1.35", "--gamma", "0.99",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# family = feko")
        assert "tau =" in lines[0]
        assert lines[1] == "k,multiplier"
        rows = [line.split(",") for line in lines[2:]]
        assert len(rows) == 65
        expected = kernel_coeffs(KernelSpec("feko", alpha=1.35, gamma=0.99), 64)
        np.testing.assert_array_equal(
            np.array([float(r[1]) for r in rows]), expected)

    def test_unknown_family(self, capsys):
        assert main(["kernel-dump", "--family", "gauss"]) == 2
        assert "error:" in capsys.readouterr().err


class TestListRecipes:
    def test_lists_known_recipes(self, capsys):
        assert main(["list-recipes"]) == 0
        stdout = capsys.readouterr().out
        for name in ("burgers-convergence", "sw-dambreak-convergence",
                     "euler-sod-sr-feko", "hl-delta-7995"):
            assert name in stdout
        # every line is "name  description"
        for line in stdout.strip().splitlines():
            name, _, description = line.partition("  ")
            assert name.strip()
            assert description.strip()
