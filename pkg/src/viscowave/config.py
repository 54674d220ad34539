"""Run configuration: grid, time stepping, model selections, validation.

Every knob that affects the solution lives here so that a run can be
reproduced from its manifest echo alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .grid import Grid, build_initial_state, raw_edge_magnitude
from .kernels import KernelSpec
from .stress import StressModel, cubic_law

__all__ = ["ConfigError", "ViscositySpec", "SimConfig", "SourceTerms"]


class ConfigError(ValueError):
    """A configuration value is missing, unknown, or physically invalid."""


@dataclass(frozen=True)
class ViscositySpec:
    """Artificial dissipation added to the velocity equation.

    mode "scaled" (default): eps_eff * (w_{j+1} - 2 w_j + w_{j-1}) / h^2
        with eps_eff = h/2, a standard first-order artificial viscosity.
    mode "undivided": (h/2) * (w_{j+1} - 2 w_j + w_{j-1}), the raw
        undivided difference; its effective diffusivity h^3/2 vanishes
        fast under refinement, kept selectable for comparison runs.
    mode "physical": a fixed user diffusivity eps, grid-independent, the
        right choice for convergence studies against a fixed equation.
    """

    mode: str = "scaled"
    eps: float = 0.0

    def __post_init__(self):
        if self.mode not in ("scaled", "undivided", "physical"):
            raise ConfigError(f"unknown viscosity mode {self.mode!r}")
        if self.mode == "physical" and self.eps <= 0:
            raise ConfigError("physical viscosity needs eps > 0")

    def epsilon_effective(self, h: float) -> float:
        """Continuum-equivalent diffusivity, used by the stability bound
        and by the dissipated-work diagnostic."""
        if self.mode == "scaled":
            return 0.5 * h
        if self.mode == "undivided":
            return 0.5 * h**3
        return self.eps

    def stencil_coefficient(self, h: float) -> float:
        """Factor multiplying the raw second difference of w."""
        return self.epsilon_effective(h) / h**2

    def describe(self) -> str:
        return f"physical(eps={self.eps:g})" if self.mode == "physical" else self.mode


@dataclass
class SourceTerms:
    """Optional forcing (x, t) -> field, used by manufactured-solution
    verification; not reachable from config files."""

    u: Callable
    v: Callable
    w: Callable


@dataclass
class SimConfig:
    grid: Grid
    t_end: float
    dt: float | str = "auto"  # positive step or "auto"
    alpha: float = 1.0
    stress: StressModel = field(default_factory=cubic_law)
    kernel: KernelSpec = field(default_factory=lambda: KernelSpec.exponential(1.0))
    viscosity: ViscositySpec = field(default_factory=ViscositySpec)
    coupling: str = "consistent"  # or "h2"
    memory_rule: str = "rectangle"  # or "trapezoid"
    snapshot_times: Sequence[float] = ()
    profile: str = "sech-pulses"
    amplitude: float = 1.0
    profile_table: Optional[str] = None
    safety_factor: float = 0.5
    diagnostics_every: int = 100
    work_accumulation: str = "cadence"  # or "per-step"
    allow_unstable_dt: bool = False
    allow_coarse_grid: bool = False
    boundary_decay_tol: float = 1e-3
    sources: Optional[SourceTerms] = None

    def __post_init__(self):
        if not self.snapshot_times:
            self.snapshot_times = (0.0, self.t_end)
        self.snapshot_times = tuple(float(t) for t in self.snapshot_times)

    def resolved_dt(self) -> float:
        from .solver import stable_dt

        bound = stable_dt(self)
        if self.dt == "auto":
            return bound
        dt = float(self.dt)
        if dt <= 0:
            raise ConfigError(f"time step must be positive, got {dt}")
        if dt > bound * (1.0 + 1e-12) and not self.allow_unstable_dt:
            raise ConfigError(
                f"time step {dt:g} exceeds the stability bound {bound:g}; "
                "reduce dt, refine less, or set allow_unstable_dt"
            )
        return dt

    def validate(self) -> None:
        """Check cross-field physical constraints; raises ConfigError."""
        if self.t_end <= 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.coupling not in ("consistent", "h2"):
            raise ConfigError(f"unknown coupling mode {self.coupling!r}")
        if self.memory_rule not in ("rectangle", "trapezoid"):
            raise ConfigError(f"unknown memory rule {self.memory_rule!r}")
        if self.work_accumulation not in ("cadence", "per-step"):
            raise ConfigError(f"unknown work accumulation mode {self.work_accumulation!r}")
        if self.diagnostics_every < 1:
            raise ConfigError("diagnostics cadence must be >= 1 steps")
        if not 0 < self.safety_factor <= 1:
            raise ConfigError(f"safety factor must lie in (0, 1], got {self.safety_factor}")

        times = np.asarray(self.snapshot_times, dtype=float)
        if np.any(times < 0) or np.any(times > self.t_end * (1 + 1e-12)):
            raise ConfigError(
                f"snapshot times {list(times)} must lie within [0, {self.t_end}]")
        if np.any(np.diff(times) < 0):
            raise ConfigError("snapshot times must be sorted ascending")

        self.resolved_dt()

        try:
            build_initial_state(self)
            edge = raw_edge_magnitude(self)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        scale = max(abs(self.amplitude), 1e-300)
        if edge > self.boundary_decay_tol * scale:
            raise ConfigError(
                f"initial profile is {edge:.3g} at the domain edge "
                f"(> {self.boundary_decay_tol:g} x amplitude); widen the domain so that "
                "zero boundary values are a faithful truncation"
            )

    def describe(self) -> dict:
        """Flat echo of every solution-affecting value, manifest-ready."""
        return {
            "L1": self.grid.L1,
            "L2": self.grid.L2,
            "J": self.grid.J,
            "h": self.grid.h,
            "dt": self.dt if self.dt == "auto" else float(self.dt),
            "dt_resolved": self.resolved_dt(),
            "t_end": self.t_end,
            "alpha": self.alpha,
            "stress": self.stress.name,
            "sigma0": self.stress.sigma0,
            "kernel": self.kernel.describe(),
            "viscosity": self.viscosity.describe(),
            "epsilon_effective": self.viscosity.epsilon_effective(self.grid.h),
            "coupling": self.coupling,
            "memory_rule": self.memory_rule,
            "snapshot_times": list(self.snapshot_times),
            "profile": self.profile,
            "amplitude": self.amplitude,
            "profile_table": self.profile_table,
            "safety_factor": self.safety_factor,
            "diagnostics_every": self.diagnostics_every,
            "work_accumulation": self.work_accumulation,
            "allow_unstable_dt": self.allow_unstable_dt,
            "allow_coarse_grid": self.allow_coarse_grid,
            "boundary_decay_tol": self.boundary_decay_tol,
        }
