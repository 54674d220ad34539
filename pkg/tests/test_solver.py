"""Semi-discrete right-hand side, RK4 stepping, stability, run loop."""

import math

import numpy as np
import pytest

from viscowave import (
    BlowUpError,
    Grid,
    KernelSpec,
    MemoryAccumulator,
    SimConfig,
    SimState,
    build_initial_state,
    mass,
    rk4_step,
    rk4_step_generic,
    run,
    semidiscrete_rhs,
    stable_dt,
)
from viscowave.config import ViscositySpec


def fresh_acc(config, state, dt):
    return MemoryAccumulator(config.kernel, state.w, dt, rule=config.memory_rule)


class TestStableDt:
    def test_plugin_formula(self):
        # h = 0.01, scaled viscosity: dispersive bound 2*sqrt(2)*h^2/4,
        # parabolic bound h^2/(2*(h/2)) = h; the dispersive one binds
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 400), t_end=1.0)
        expected = 0.5 * min(2.0 * math.sqrt(2.0) * 1e-4 / 4.0, 0.01)
        assert stable_dt(cfg) == pytest.approx(expected, rel=1e-12)
        assert stable_dt(cfg) == pytest.approx(3.5355339e-5, rel=1e-6)

    def test_vanishing_viscosity_leaves_dispersive_bound(self):
        # undivided mode has eps_eff = h^3/2, far from binding
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 400),
                        viscosity=ViscositySpec(mode="undivided"), t_end=1.0)
        expected = 0.5 * 2.0 * math.sqrt(2.0) * 1e-4 / 4.0
        assert stable_dt(cfg) == pytest.approx(expected, rel=1e-12)

    def test_quadratic_in_h(self):
        c1 = SimConfig(grid=Grid(-2.0, 2.0, 400), t_end=1.0)
        c2 = SimConfig(grid=Grid(-2.0, 2.0, 200), t_end=1.0)
        assert stable_dt(c2) == pytest.approx(4.0 * stable_dt(c1), rel=1e-12)


class TestRhs:
    def test_zero_state_fixed_point(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=1.0, profile="zero")
        st = SimState.zeros(cfg.grid)
        acc = fresh_acc(cfg, st, 1e-4)
        du, dv, dw = semidiscrete_rhs(st, 0.0, acc, cfg)
        assert not du.any() and not dv.any() and not dw.any()

    def test_plane_wave_symbol(self):
        # free envelope equation: du = -i (4/h^2) sin^2(kh/2) u on a plane wave
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 256), t_end=1.0, alpha=0.0, profile="zero")
        g = cfg.grid
        k = 2.0 * np.pi * 3.0 / 4.0  # integer mode keeps the wave periodic
        st = SimState.zeros(g)
        st.u[:] = np.exp(1j * k * g.x)
        st.zero_boundaries()
        acc = fresh_acc(cfg, st, 1e-4)
        du, _, _ = semidiscrete_rhs(st, 0.0, acc, cfg)
        symbol = -1j * (4.0 / g.h**2) * np.sin(k * g.h / 2.0) ** 2
        interior = slice(2, -2)
        assert np.max(np.abs(du[interior] - symbol * st.u[interior])) <= 1e-7

    def test_cubic_gradient(self):
        # v = x: central difference of sigma(v) = v^3 + v is exactly
        # 3 x^2 + 1 + h^2 at interior nodes
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 200), t_end=1.0, profile="zero")
        g = cfg.grid
        st = SimState.zeros(g)
        st.v[:] = g.x
        st.zero_boundaries()
        acc = fresh_acc(cfg, st, 1e-4)
        du, dv, dw = semidiscrete_rhs(st, 0.0, acc, cfg)
        interior = slice(2, -2)
        expected = 3.0 * g.x[interior] ** 2 + 1.0 + g.h**2
        assert np.max(np.abs(dw[interior] - expected)) <= 1e-10
        assert not dv.any() and not du.any()

    def test_boundary_rows_frozen(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=1.0, profile="zero")
        rng = np.random.default_rng(2)
        st = SimState.zeros(cfg.grid)
        st.u[:] = rng.normal(size=65) + 1j * rng.normal(size=65)
        st.v[:] = rng.normal(size=65)
        st.w[:] = rng.normal(size=65)
        st.zero_boundaries()
        acc = fresh_acc(cfg, st, 1e-4)
        du, dv, dw = semidiscrete_rhs(st, 0.0, acc, cfg)
        for arr in (du, dv, dw):
            assert arr[0] == 0.0 and arr[-1] == 0.0

    def test_nonfinite_input_rejected(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=1.0, profile="zero")
        st = SimState.zeros(cfg.grid)
        st.w[5] = np.nan
        acc = fresh_acc(cfg, st, 1e-4)
        with pytest.raises(BlowUpError):
            semidiscrete_rhs(st, 0.0, acc, cfg)


class TestRk4:
    def test_scalar_exponential(self):
        # y' = y, one step of 0.1: the frozen stage arithmetic gives
        # 1.1051708333...; e^0.1 = 1.1051709180... (O(dt^5) apart)
        f = lambda y, t: (y[0],)
        (y1,) = rk4_step_generic(f, (np.array(1.0),), 0.0, 0.1)
        assert float(y1) == pytest.approx(1.1051708333333333, abs=1e-14)
        assert abs(float(y1) - math.exp(0.1)) <= 1e-5

    def test_zero_state_fixed_point(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=1.0, profile="zero")
        st = SimState.zeros(cfg.grid)
        dt = stable_dt(cfg)
        acc = fresh_acc(cfg, st, dt)
        st2 = rk4_step(st, dt, acc, cfg)
        assert not st2.u.any() and not st2.v.any() and not st2.w.any()
        assert st2.t == dt and acc.n == 1

    def test_single_step_mass_conservation(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 500), t_end=1.0)
        st = build_initial_state(cfg)
        dt = stable_dt(cfg) / 10.0
        acc = fresh_acc(cfg, st, dt)
        m0 = mass(st, cfg.grid)
        st2 = rk4_step(st, dt, acc, cfg)
        assert abs(mass(st2, cfg.grid) - m0) / m0 <= 1e-8

    def test_translation_equivariance(self):
        # compactly supported data shifted by whole cells evolves into the
        # equally shifted solution, exactly, while the support stays away
        # from the boundary rows
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 500), t_end=1.0, profile="zero")
        g = cfg.grid
        dt = stable_dt(cfg)
        shift = 30

        center = -0.5
        st = SimState.zeros(g)
        s = np.where(np.abs(g.x - center) < 0.5,
                     np.cos(np.pi * (g.x - center)) ** 2, 0.0)
        st.u[:] = 0.3 * s * np.exp(2j * (g.x - center))
        st.v[:] = 0.4 * s
        st.w[:] = -0.2 * s
        st.zero_boundaries()

        shifted = SimState(t=0.0, u=np.roll(st.u, shift), v=np.roll(st.v, shift),
                           w=np.roll(st.w, shift), grid=g)

        def advance(state, n):
            acc = fresh_acc(cfg, state, dt)
            for _ in range(n):
                state = rk4_step(state, dt, acc, cfg)
            return state

        a = advance(st, 20)
        b = advance(shifted, 20)
        assert np.array_equal(np.roll(a.u, shift)[1 + shift:-1], b.u[1 + shift:-1])
        assert np.array_equal(np.roll(a.v, shift)[1 + shift:-1], b.v[1 + shift:-1])
        assert np.array_equal(np.roll(a.w, shift)[1 + shift:-1], b.w[1 + shift:-1])

    def test_blow_up_beyond_stability(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=1.0, profile="zero")
        g = cfg.grid
        rng = np.random.default_rng(7)
        st = SimState.zeros(g)
        st.u[:] = 1e-3 * (rng.normal(size=65) + 1j * rng.normal(size=65))
        st.zero_boundaries()
        dt = stable_dt(cfg)

        stable = st.copy()
        acc = fresh_acc(cfg, stable, dt)
        for _ in range(200):
            stable = rk4_step(stable, dt, acc, cfg)
        assert np.max(np.abs(stable.u)) < 1.0

        unstable = st.copy()
        acc = fresh_acc(cfg, unstable, 4.0 * dt)
        with pytest.raises(BlowUpError):
            for _ in range(400):
                unstable = rk4_step(unstable, 4.0 * dt, acc, cfg)

    def test_zero_coupling_keeps_u_exactly_zero(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 200), t_end=1.0)
        st = build_initial_state(cfg)
        st.u[:] = 0.0
        dt = stable_dt(cfg)
        acc = fresh_acc(cfg, st, dt)
        for _ in range(100):
            st = rk4_step(st, dt, acc, cfg)
        assert np.all(st.u == 0.0)
        assert np.max(np.abs(st.w)) > 0.0  # the long waves still move


class TestRun:
    def test_zero_run(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=0.01, profile="zero",
                        snapshot_times=(0.0, 0.005, 0.01), diagnostics_every=10)
        report = run(cfg)
        assert report.termination == "completed"
        assert len(report.snapshots) == 3
        for _, _, snap in report.snapshots:
            assert not snap.u.any() and not snap.v.any() and not snap.w.any()
        assert report.final_diagnostics.mass == 0.0
        assert report.final_diagnostics.balance_residual == 0.0

    def test_snapshot_times_nearest_step(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 200), t_end=0.001,
                        snapshot_times=(0.0, 0.00031, 0.001), diagnostics_every=50)
        report = run(cfg)
        dt = report.dt
        for requested, actual, snap in report.snapshots:
            assert actual == pytest.approx(round(requested / dt) * dt, rel=1e-12)
            assert snap.t == actual
        assert report.steps == int(np.ceil(0.001 / dt))

    def test_sinks_receive_immutable_snapshots(self):
        seen = []
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 200), t_end=0.0005,
                        snapshot_times=(0.0, 0.0005))
        run(cfg, sinks=[lambda snap, req, act: seen.append((req, act, snap))])
        assert len(seen) == 2
        with pytest.raises(ValueError):
            seen[0][2].u[3] = 1.0

    def test_blow_up_reported_not_raised(self):
        cfg = SimConfig(grid=Grid(-2.0, 2.0, 64), t_end=0.5,
                        profile="gaussian", allow_unstable_dt=True)
        cfg.dt = 4.0 * stable_dt(cfg)
        report = run(cfg)
        assert report.termination == "blow-up"
        assert "non-finite" in report.blow_up_info
        assert report.snapshots  # the initial snapshot survives
