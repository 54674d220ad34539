"""Conserved-quantity and balance diagnostics for completed or running
simulations.

Two exact structural facts of the semi-discrete scheme drive the design:

* the l2 mass h * sum |u_j|^2 is conserved exactly by the spatial scheme,
  so any drift measures pure time-integration error;
* with the energy gradient term measured through forward differences
  (equivalently the quadratic form (u, -D2 u)/h^2) and the dissipated
  power through forward differences of w, the discrete energy satisfies
  dE/dt + integral(F(w) w) + eps_eff integral(w_x^2) = 0 exactly along
  the semi-discrete flow, for any memory field F the stepper actually
  applied.

``energy`` therefore defaults to the matched forward-difference form
(ux_mode="matched"); a central-difference variant is available for
comparison but carries an O(h^2) identity mismatch that does not shrink
with the time step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import Grid, SimState
from .kernels import MemoryAccumulator, memory_term
from .stress import StressModel, HypothesisReport, check_hypotheses

__all__ = [
    "DiagnosticsRecord",
    "SpectrumReport",
    "Recorder",
    "mass",
    "energy",
    "memory_work_rate",
    "viscous_work_rate",
    "balance_residual",
    "spectrum",
    "new_band_modes",
]

DIAGNOSTIC_COLUMNS = ("t", "mass", "energy", "memory_work", "viscous_work",
                      "balance_residual", "max_u", "max_v", "max_w")


def _trapz(values: np.ndarray, h: float) -> float:
    return float(np.trapezoid(values, dx=h))


def mass(state: SimState, grid: Grid) -> float:
    """Trapezoidal integral of |u|^2 over the grid."""
    return _trapz(np.abs(state.u) ** 2, grid.h)


def energy(state: SimState, grid: Grid, model: StressModel, alpha: float,
           ux_mode: str = "matched") -> float:
    """The balanced energy functional

        int |u_x|^2 + (alpha/2) int |u|^4 + int v |u|^2
        + (1/2) int w^2 + int Sigma(v).

    ux_mode "matched" measures |u_x|^2 with forward differences, the form
    the semi-discrete flow balances exactly; "central" uses central
    differences interiorly with one-sided second-order ends.
    """
    h = grid.h
    u, v, w = state.u, state.v, state.w
    absu2 = np.abs(u) ** 2

    if ux_mode == "matched":
        dux = np.diff(u) / h
        grad = h * float(np.real(np.vdot(dux, dux)))
    elif ux_mode == "central":
        ux = np.empty_like(u)
        ux[1:-1] = (u[2:] - u[:-2]) / (2.0 * h)
        ux[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
        ux[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * h)
        grad = _trapz(np.abs(ux) ** 2, h)
    else:
        raise ValueError(f"unknown ux_mode {ux_mode!r}")

    return (grad
            + 0.5 * alpha * _trapz(absu2**2, h)
            + _trapz(v * absu2, h)
            + 0.5 * _trapz(w**2, h)
            + _trapz(np.asarray(model.stored_energy(v), dtype=float), h))


def memory_work_rate(state: SimState, acc: MemoryAccumulator, grid: Grid) -> float:
    """Instantaneous rate at which the memory term drains energy,
    -int F(w) w dx at the accumulator's current level.

    The memory functional enters the velocity equation with a plus sign,
    so multiplying that equation by w puts +int F(w) w on the energy
    production side; the drained work that balances the energy identity
    E(t) - E(0) + memory_work + viscous_work = 0 is its negative.
    """
    mem = memory_term(acc, state.w, state.t)
    return -grid.h * float(np.dot(mem, state.w))


def viscous_work_rate(state: SimState, grid: Grid, eps_eff: float) -> float:
    """Instantaneous eps_eff int w_x^2 dx with forward differences."""
    dwx = np.diff(state.w) / grid.h
    return eps_eff * grid.h * float(np.dot(dwx, dwx))


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    memory_work: float
    viscous_work: float
    balance_residual: float
    max_u: float
    max_v: float
    max_w: float

    def as_row(self) -> tuple:
        return tuple(getattr(self, name) for name in DIAGNOSTIC_COLUMNS)


class Recorder:
    """Builds the diagnostics series for a run.

    In cadence mode the work integrals are advanced by the trapezoid rule
    between consecutive records; in per-step mode the stepper integrates
    them stage-by-stage and the recorder just samples the running sums.
    """

    def __init__(self, config, dt: float, per_step: bool):
        self.config = config
        self.eps_eff = config.viscosity.epsilon_effective(config.grid.h)
        self.per_step = per_step
        self.e0: Optional[float] = None
        self.memory_work = 0.0
        self.viscous_work = 0.0
        self._prev_t: Optional[float] = None
        self._prev_rates: Optional[tuple[float, float]] = None

    def record(self, state: SimState, acc: MemoryAccumulator, work) -> DiagnosticsRecord:
        grid = self.config.grid
        m = mass(state, grid)
        e = energy(state, grid, self.config.stress, self.config.alpha)
        if self.e0 is None:
            self.e0 = e

        if self.per_step:
            self.memory_work = work.memory_work
            self.viscous_work = work.viscous_work
        else:
            r_mem = memory_work_rate(state, acc, grid)
            r_visc = viscous_work_rate(state, grid, self.eps_eff)
            if self._prev_t is not None:
                half = 0.5 * (state.t - self._prev_t)
                self.memory_work += half * (self._prev_rates[0] + r_mem)
                self.viscous_work += half * (self._prev_rates[1] + r_visc)
            self._prev_t = state.t
            self._prev_rates = (r_mem, r_visc)

        residual = e - self.e0 + self.memory_work + self.viscous_work
        mu, mv, mw = state.max_abs()
        return DiagnosticsRecord(
            t=state.t, mass=m, energy=e,
            memory_work=self.memory_work, viscous_work=self.viscous_work,
            balance_residual=residual, max_u=mu, max_v=mv, max_w=mw,
        )


def balance_residual(records) -> np.ndarray:
    """Residual series E(t) - E(0) + memory_work(t) + viscous_work(t)
    recomputed from a diagnostics series (at least two records)."""
    if len(records) < 2:
        raise ValueError("need at least two diagnostics records")
    e = np.array([r.energy for r in records])
    mw = np.array([r.memory_work for r in records])
    vw = np.array([r.viscous_work for r in records])
    return e - e[0] + mw + vw


@dataclass
class SpectrumReport:
    """Discrete modal energies of one field at one time.

    Real fields get a one-sided spectrum (modes 0..J/2 with doubled
    interior weights); the complex field keeps all J signed modes.  The
    energies sum to the grid L2 norm of the field (Parseval).
    """

    field: str
    t: float
    modes: np.ndarray
    wavenumbers: np.ndarray
    energies: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.energies))


def spectrum(state: SimState, field: str, grid: Optional[Grid] = None) -> SpectrumReport:
    """Modal energy decomposition of u, v, or w (periodic DFT over the J
    cells; the repeated, identically zero endpoint node is dropped)."""
    grid = grid or state.grid
    if grid.n_nodes < 16:
        raise ValueError("spectrum needs at least 16 nodes")
    arr = getattr(state, field)[:-1]
    J = grid.J
    h = grid.h
    length = grid.L2 - grid.L1

    if np.iscomplexobj(arr):
        coef = np.fft.fft(arr)
        modes = np.fft.fftfreq(J, d=1.0 / J).astype(int)
        energies = (h / J) * np.abs(coef) ** 2
    else:
        coef = np.fft.rfft(arr)
        modes = np.arange(len(coef))
        weights = np.full(len(coef), 2.0)
        weights[0] = 1.0
        if J % 2 == 0:
            weights[-1] = 1.0
        energies = (h / J) * weights * np.abs(coef) ** 2

    wavenumbers = 2.0 * np.pi * modes / length
    return SpectrumReport(field=field, t=state.t, modes=modes,
                          wavenumbers=wavenumbers, energies=energies)


def new_band_modes(before: SpectrumReport, after: SpectrumReport,
                   quiet_rel: float = 1e-6, active_rel: float = 1e-4) -> np.ndarray:
    """Modes that were quiet initially (<= quiet_rel of the initial peak)
    but carry at least active_rel of the final peak afterwards; a
    non-empty result signals interaction-generated wave content."""
    if before.energies.shape != after.energies.shape:
        raise ValueError("spectra live on different grids")
    quiet = before.energies <= quiet_rel * np.max(before.energies)
    active = after.energies >= active_rel * np.max(after.energies)
    return np.asarray(before.modes)[quiet & active]


def quick_hypothesis_check(model: StressModel,
                           v_range: tuple[float, float] = (-10.0, 10.0)
                           ) -> Optional[HypothesisReport]:
    """Best-effort admissibility check used as a run-start warning."""
    try:
        return check_hypotheses(model, v_range[0], v_range[1], n_samples=501)
    except Exception:
        return None
