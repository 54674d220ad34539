"""Manufactured-solution verification of the spatial and temporal orders.

A smooth, rapidly decaying exact solution is imposed by adding closed-form
forcing to each equation (cubic stress law, fixed physical viscosity, no
memory).  Central differences should then show second-order L2 errors
under grid refinement, and the RK4 stepper fourth-order errors under step
refinement at a fixed grid.  The forcing expressions below are plain
transcriptions of the symbolic residuals; the test-suite re-derives them
with a computer-algebra system and checks agreement at random points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig, SourceTerms, ViscositySpec
from .grid import Grid, SimState
from .kernels import KernelSpec, MemoryAccumulator
from .solver import rk4_step
from .stress import cubic_law

__all__ = [
    "manufactured_state",
    "manufactured_sources",
    "manufactured_config",
    "run_to",
    "solution_error",
    "spatial_order_study",
    "temporal_order_study",
    "OrderStudy",
]

EPS_PHYSICAL = 0.01
ALPHA = 1.0


def _envelope(x):
    phi = np.exp(-6.0 * x**2)
    dphi = -12.0 * x * phi
    d2phi = (144.0 * x**2 - 12.0) * phi
    return phi, dphi, d2phi


def exact_fields(x, t):
    """The imposed solution triple (u, v, w) at (x, t)."""
    phi, _, _ = _envelope(x)
    u = phi * np.exp(1j * (2.0 * x - t))
    v = 0.3 * phi * np.cos(2.0 * x + t)
    w = 0.4 * phi * np.sin(2.0 * x - t)
    return u, v, w


def manufactured_state(grid: Grid, t: float) -> SimState:
    u, v, w = exact_fields(grid.x, t)
    state = SimState(t=t, u=u, v=v, w=w, grid=grid)
    state.zero_boundaries()
    return state


def manufactured_sources(eps: float = EPS_PHYSICAL, alpha: float = ALPHA) -> SourceTerms:
    """Forcing that makes ``exact_fields`` solve the system with the cubic
    stress law, diffusivity eps, and no memory."""

    def src_u(x, t):
        phi, dphi, d2phi = _envelope(x)
        carrier = np.exp(1j * (2.0 * x - t))
        u = phi * carrier
        u_t = -1j * u
        u_xx = (d2phi + 4j * dphi - 4.0 * phi) * carrier
        v = 0.3 * phi * np.cos(2.0 * x + t)
        return u_t - 1j * u_xx + 1j * v * u + 1j * alpha * np.abs(u) ** 2 * u

    def src_v(x, t):
        phi, dphi, _ = _envelope(x)
        v_t = -0.3 * phi * np.sin(2.0 * x + t)
        w_x = 0.4 * (dphi * np.sin(2.0 * x - t) + 2.0 * phi * np.cos(2.0 * x - t))
        return v_t - w_x

    def src_w(x, t):
        phi, dphi, d2phi = _envelope(x)
        c_p, s_p = np.cos(2.0 * x + t), np.sin(2.0 * x + t)
        c_m, s_m = np.cos(2.0 * x - t), np.sin(2.0 * x - t)
        v = 0.3 * phi * c_p
        v_x = 0.3 * (dphi * c_p - 2.0 * phi * s_p)
        w_t = -0.4 * phi * c_m
        w_xx = 0.4 * (d2phi * s_m + 4.0 * dphi * c_m - 4.0 * phi * s_m)
        absu2_x = 2.0 * phi * dphi
        return w_t - (3.0 * v**2 + 1.0) * v_x - absu2_x - eps * w_xx

    return SourceTerms(u=src_u, v=src_v, w=src_w)


def manufactured_config(J: int, t_end: float, dt="auto",
                        eps: float = EPS_PHYSICAL) -> SimConfig:
    return SimConfig(
        grid=Grid(-2.0, 2.0, J),
        t_end=t_end,
        dt=dt,
        alpha=ALPHA,
        stress=cubic_law(),
        kernel=KernelSpec.constant(0.0),
        viscosity=ViscositySpec(mode="physical", eps=eps),
        profile="zero",
        sources=manufactured_sources(eps=eps),
    )


def run_to(config: SimConfig, state: SimState, t_end: float, dt: float) -> SimState:
    """Drive rk4_step from the given state to t_end in uniform steps."""
    n_steps = int(round(t_end / dt))
    acc = MemoryAccumulator(config.kernel, state.w, dt)
    for _ in range(n_steps):
        state = rk4_step(state, dt, acc, config)
    return state


def solution_error(state: SimState, reference: SimState) -> float:
    """Combined grid-L2 distance over the three fields."""
    h = state.grid.h
    du = state.u - reference.u
    dv = state.v - reference.v
    dw = state.w - reference.w
    return float(np.sqrt(h * (np.vdot(du, du).real + np.dot(dv, dv) + np.dot(dw, dw))))


@dataclass
class OrderStudy:
    label: str
    parameters: list  # refined quantity (h or dt)
    errors: list
    orders: list

    def to_text(self) -> str:
        lines = [f"{self.label} refinement study"]
        for i, (p, e) in enumerate(zip(self.parameters, self.errors)):
            order = f"   observed order {self.orders[i - 1]:.3f}" if i else ""
            lines.append(f"  {p:.6g}  error {e:.6e}{order}")
        return "\n".join(lines)


def spatial_order_study(J_values=(500, 1000, 2000), t_end: float = 0.002) -> OrderStudy:
    """L2 error against the manufactured solution on a sequence of grids,
    each integrated with its own stability-limited step so the temporal
    error is negligible."""
    errors = []
    hs = []
    for J in J_values:
        config = manufactured_config(J, t_end)
        dt = config.resolved_dt()
        n = int(np.ceil(t_end / dt))
        dt = t_end / n  # land exactly on t_end
        state = run_to(config, manufactured_state(config.grid, 0.0), t_end, dt)
        errors.append(solution_error(state, manufactured_state(config.grid, t_end)))
        hs.append(config.grid.h)
    orders = [float(np.log2(errors[i] / errors[i + 1])) for i in range(len(errors) - 1)]
    return OrderStudy(label="spatial (h)", parameters=hs, errors=errors, orders=orders)


def temporal_order_study(J: int = 128, dt0: float = 4e-4, t_end: float = 0.032,
                         refinements: int = 2) -> OrderStudy:
    """Error against a finely stepped reference on one fixed grid.

    The memory is switched off (zero kernel), so the only time-dependence
    is the forcing, evaluated at the true stage times; the classical RK4
    order should emerge.
    """
    config = manufactured_config(J, t_end)
    initial = manufactured_state(config.grid, 0.0)

    dts = [dt0 / 2**i for i in range(refinements)]
    reference = run_to(config, initial.copy(), t_end, dt0 / 2**(refinements + 2))

    errors = [solution_error(run_to(config, initial.copy(), t_end, dt), reference)
              for dt in dts]
    orders = [float(np.log2(errors[i] / errors[i + 1])) for i in range(len(errors) - 1)]
    return OrderStudy(label="temporal (dt)", parameters=dts, errors=errors, orders=orders)
