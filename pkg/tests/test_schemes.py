"""Time stepping, stabilized tendencies, observers, and blowup reporting."""

import numpy as np
import pytest

from specrelax.errors import BlowupError, ConfigError
from specrelax.grids import FourierGrid
from specrelax.kernels import KernelSpec, kernel_coeffs
from specrelax.models import BurgersModel, make_model, make_problem_grid, problem
from specrelax.schemes import (
    EnergyRecorder,
    SchemeConfig,
    SnapshotRecorder,
    SpectrumRecorder,
    build_rhs,
    relaxation_multiplier,
    resolve_dt,
    rk4_step,
    run,
    svv_multiplier,
)


def burgers_setup(n=65, amplitude=1.0):
    g = FourierGrid(n)
    model = BurgersModel(g)
    u = amplitude * np.sin(2 * np.pi * g.x)
    return g, model, model.state_from_nodal(u[None, :])


class TestSchemeConfigValidation:
    def test_sr_requires_kernel(self):
        with pytest.raises(ConfigError):
            SchemeConfig(kind="sr")

    def test_pps_rejects_kernel(self):
        with pytest.raises(ConfigError):
            SchemeConfig(kind="pps", kernel=KernelSpec("feko", alpha=0.5, gamma=0.99))

    def test_svv_eps_only_for_svv(self):
        with pytest.raises(ConfigError):
            SchemeConfig(kind="pps", svv_eps=0.1)

    def test_dt_and_cfl_are_exclusive(self):
        with pytest.raises(ConfigError):
            SchemeConfig(kind="pps", dt=1e-4, cfl=0.4)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            SchemeConfig(kind="weno")

    def test_dealias_defaults(self):
        kern = KernelSpec("feko", alpha=0.5, gamma=0.99)
        assert SchemeConfig(kind="pps").dealias_resolved is True
        assert SchemeConfig(kind="svv").dealias_resolved is True
        assert SchemeConfig(kind="sr", kernel=kern).dealias_resolved is False
        assert SchemeConfig(kind="sp", kernel=kern).dealias_resolved is False
        assert SchemeConfig(kind="pps", dealias=False).dealias_resolved is False


class TestRK4:
    def test_fourth_order_on_linear_decay(self):
        # u' = -u integrated to t=1; halving dt must cut the error ~16x.
        errors = []
        for steps in (8, 16, 32):
            dt = 1.0 / steps
            y = np.array([[1.0 + 0.0j]])
            for _ in range(steps):
                y = rk4_step(y, lambda s: -s, dt)
            errors.append(abs(y[0, 0] - np.exp(-1.0)))
        order1 = np.log2(errors[0] / errors[1])
        order2 = np.log2(errors[1] / errors[2])
        assert 3.8 < order1 < 4.2
        assert 3.8 < order2 < 4.2

    def test_stage_blowup_is_reported(self):
        def bad_rhs(state):
            return state * np.inf

        with pytest.raises(BlowupError):
            rk4_step(np.ones((1, 4), dtype=complex), bad_rhs, 0.1)


class TestResolveDt:
    def test_explicit_dt_wins(self):
        _, model, state = burgers_setup()
        scheme = SchemeConfig(kind="pps", dt=1.25e-4)
        assert resolve_dt(model, state, scheme) == 1.25e-4

    def test_cfl_rule(self):
        g, model, state = burgers_setup(amplitude=2.0)
        scheme = SchemeConfig(kind="pps", cfl=0.3)
        speed = np.max(np.abs(2.0 * np.sin(2 * np.pi * g.x)))
        expected = 0.3 * g.min_spacing / speed
        assert resolve_dt(model, state, scheme) == pytest.approx(expected, rel=1e-12)

    def test_default_safety_factor(self):
        g, model, state = burgers_setup(amplitude=1.0)
        scheme = SchemeConfig(kind="pps")
        speed = np.max(np.abs(np.sin(2 * np.pi * g.x)))
        expected = 0.4 * g.min_spacing / speed
        assert resolve_dt(model, state, scheme) == pytest.approx(expected, rel=1e-12)

    def test_zero_speed_needs_explicit_dt(self):
        g = FourierGrid(65)
        model = BurgersModel(g)
        state = model.state_from_nodal(np.zeros((1, 65)))
        with pytest.raises(ConfigError):
            resolve_dt(model, state, SchemeConfig(kind="pps"))


class TestStabilizedTendencies:
    def test_sr_adds_relaxation_to_pps(self):
        _, model, state = burgers_setup()
        kern = KernelSpec("feko", alpha=0.8, gamma=0.9)
        mult, tau = relaxation_multiplier(kern, model.grid.n_modes)
        assert tau == pytest.approx(model.grid.n_modes ** -0.8)
        sr = build_rhs(model, SchemeConfig(kind="sr", kernel=kern))
        pps = build_rhs(model, SchemeConfig(kind="pps"))
        np.testing.assert_allclose(sr(state), pps(state) + state * mult, atol=1e-12)

    def test_relaxation_multiplier_vanishes_on_plateau(self):
        kern = KernelSpec("dlvp", alpha=1.0, gamma=0.99, r=0.5)
        mult, _ = relaxation_multiplier(kern, 512)
        assert mult[0] == 0.0  # K(0) = 1 exactly: the mean is never relaxed
        coeffs = kernel_coeffs(kern, 512)
        np.testing.assert_allclose(mult[coeffs == 1.0], 0.0, atol=1e-18)

    def test_svv_multiplier_structure(self):
        g = FourierGrid(129)
        mult = svv_multiplier(g, eps=0.01, cut=8.0)
        assert mult.shape == (g.n_modes + 1,)
        np.testing.assert_allclose(mult[:9], 0.0, atol=1e-18)  # inactive below cut
        k = g.n_modes
        assert mult[k] == pytest.approx(-0.01 * g.wavenumbers[k] ** 2)

    def test_svv_zero_eps_is_pps(self):
        _, model, state = burgers_setup()
        svv = build_rhs(model, SchemeConfig(kind="svv", svv_eps=0.0))
        pps = build_rhs(model, SchemeConfig(kind="pps"))
        np.testing.assert_allclose(svv(state), pps(state), atol=0.0)


class TestReductionIdentities:
    """SR/SP with the identity kernel and SVV with zero viscosity are PPS."""

    def _trajectory(self, scheme, steps=20):
        spec = problem("burgers-ic0")
        g = make_problem_grid(spec, 65)
        model = make_model(spec, g, dealias=scheme.dealias_resolved)
        state = spec.initial_state(model, g)
        result = run(model, state, scheme, t_end=steps * 1e-4)
        return result.state

    def test_sr_identity_kernel_matches_pps(self):
        ident = KernelSpec("dirichlet", alpha=1.0, gamma=0.99)
        ref = self._trajectory(SchemeConfig(kind="pps", dealias=False, dt=1e-4))
        sr = self._trajectory(SchemeConfig(kind="sr", kernel=ident, dt=1e-4))
        assert np.max(np.abs(sr - ref)) < 1e-14

    def test_sp_identity_kernel_matches_pps(self):
        ident = KernelSpec("dirichlet", alpha=1.0, gamma=0.99)
        ref = self._trajectory(SchemeConfig(kind="pps", dealias=False, dt=1e-4))
        sp = self._trajectory(SchemeConfig(kind="sp", kernel=ident, dealias=False, dt=1e-4))
        assert np.max(np.abs(sp - ref)) < 1e-14

    def test_svv_zero_eps_matches_pps(self):
        ref = self._trajectory(SchemeConfig(kind="pps", dt=1e-4))
        svv = self._trajectory(SchemeConfig(kind="svv", svv_eps=0.0, dt=1e-4))
        assert np.max(np.abs(svv - ref)) < 1e-14


class TestSpectralPurging:
    def test_purge_schedule_and_energy_drop(self):
        spec = problem("burgers-ic0")
        g = make_problem_grid(spec, 65)
        kern = KernelSpec("feko", alpha=1.5, gamma=0.9)
        tau = kern.params(g.n_modes).tau
        model = make_model(spec, g)
        state = spec.initial_state(model, g)
        scheme = SchemeConfig(kind="sp", kernel=kern, dealias=False, dt=tau / 4)
        result = run(model, state, scheme, t_end=3.2 * tau)
        assert len(result.purges) == 3
        for j, ev in enumerate(result.purges, start=1):
            assert ev.t == pytest.approx(j * tau, abs=tau / 4 + 1e-12)
            assert np.all(ev.energy_after <= ev.energy_before + 1e-15)

    def test_sp_requires_dt_at_most_tau(self):
        spec = problem("burgers-ic0")
        g = make_problem_grid(spec, 65)
        kern = KernelSpec("feko", alpha=1.5, gamma=0.9)
        tau = kern.params(g.n_modes).tau
        model = make_model(spec, g)
        state = spec.initial_state(model, g)
        scheme = SchemeConfig(kind="sp", kernel=kern, dt=2 * tau)
        with pytest.raises(ConfigError):
            run(model, state, scheme, t_end=10 * tau)


class TestObservers:
    def _run(self, times, dt=1e-3, t_end=1e-2, every_energy=False):
        _, model, state = burgers_setup()
        snaps = SnapshotRecorder(times)
        observers = [snaps]
        if every_energy:
            observers.append(EnergyRecorder())
        run(model, state, SchemeConfig(kind="pps", dt=dt), t_end, observers=observers)
        return observers

    def test_times_match_nearest_step(self):
        snaps, = self._run([0.0042])
        assert len(snaps.snapshots) == 1
        assert snaps.snapshots[0][0] == pytest.approx(0.004)

    def test_tie_goes_to_later_step(self):
        snaps, = self._run([0.0035])
        assert snaps.snapshots[0][0] == pytest.approx(0.004)

    def test_time_zero_records_initial_state(self):
        snaps, = self._run([0.0])
        assert snaps.snapshots[0][0] == 0.0

    def test_times_beyond_end_get_final_state(self):
        snaps, = self._run([5.0])
        assert snaps.snapshots[0][0] == pytest.approx(0.01)

    def test_every_step_recorder_includes_initial_state(self):
        snaps, energy = self._run([0.01], every_energy=True)
        t, e = energy.series()
        assert len(t) == 11  # initial state + 10 steps
        assert t[0] == 0.0
        assert e.shape == (11, 1)

    def test_spectrum_recorder_shape(self):
        _, model, state = burgers_setup()
        rec = SpectrumRecorder([0.002])
        run(model, state, SchemeConfig(kind="pps", dt=1e-3), 4e-3, observers=[rec])
        t, power = rec.spectra[0]
        assert power.shape == (1, model.grid.n_modes + 1)
        assert np.all(power >= 0.0)


class TestRunLoop:
    def test_rejects_nonpositive_t_end(self):
        _, model, state = burgers_setup()
        with pytest.raises(ConfigError):
            run(model, state, SchemeConfig(kind="pps", dt=1e-3), 0.0)

    def test_step_count_and_final_time(self):
        _, model, state = burgers_setup()
        result = run(model, state, SchemeConfig(kind="pps", dt=1e-3), 0.01)
        assert result.steps == 10
        assert result.t == pytest.approx(0.01)

    def test_blowup_is_stamped_with_time_and_step(self):
        # A absurdly large step makes RK4 on Burgers overflow within a few steps.
        _, model, state = burgers_setup(amplitude=10.0)
        with pytest.raises(BlowupError) as exc:
            run(model, state, SchemeConfig(kind="pps", dealias=False, dt=10.0), 100.0)
        err = exc.value
        assert np.isfinite(err.t)
        assert err.step_index >= 1

    def test_input_state_is_not_mutated(self):
        _, model, state = burgers_setup()
        before = state.copy()
        run(model, state, SchemeConfig(kind="pps", dt=1e-3), 5e-3)
        np.testing.assert_array_equal(state, before)
