"""viscowave: a 1-D finite-difference simulator for a coupled
Schrodinger / quasilinear viscoelasticity system with memory.

A complex short-wave envelope u rides on long waves described by the
deformation gradient v and velocity w of a viscoelastic medium whose
stress response carries an exponentially fading history.  The history
convolution is rewritten through the resolvent of the memory kernel into
a local functional that the explicit RK4 stepper advances in O(1) work
per step; mass and energy-balance diagnostics make the model's
conservation structure checkable on every run.
"""

__version__ = "0.1.0"

from .grid import Grid, SimState, BlowUpError, build_initial_state
from .config import SimConfig, ViscositySpec, SourceTerms, ConfigError
from .kernels import (
    KernelSpec,
    ResolventTable,
    MemoryAccumulator,
    solve_resolvent,
    exact_resolvent,
    memory_direct,
    memory_step,
    memory_term,
)
from .stress import (
    StressModel,
    HypothesisReport,
    cubic_law,
    linear_law,
    custom_law,
    make_stress_model,
    sigma_eval,
    check_hypotheses,
    riemann_forward,
    riemann_inverse,
)
from .solver import semidiscrete_rhs, rk4_step, rk4_step_generic, stable_dt, run, RunReport
from .diagnostics import (
    DiagnosticsRecord,
    SpectrumReport,
    mass,
    energy,
    balance_residual,
    spectrum,
    new_band_modes,
)

__all__ = [
    "Grid", "SimState", "BlowUpError", "build_initial_state",
    "SimConfig", "ViscositySpec", "SourceTerms", "ConfigError",
    "KernelSpec", "ResolventTable", "MemoryAccumulator",
    "solve_resolvent", "exact_resolvent", "memory_direct", "memory_step", "memory_term",
    "StressModel", "HypothesisReport", "cubic_law", "linear_law", "custom_law",
    "make_stress_model", "sigma_eval", "check_hypotheses",
    "riemann_forward", "riemann_inverse",
    "semidiscrete_rhs", "rk4_step", "rk4_step_generic", "stable_dt", "run", "RunReport",
    "DiagnosticsRecord", "SpectrumReport", "mass", "energy",
    "balance_residual", "spectrum", "new_band_modes",
]
