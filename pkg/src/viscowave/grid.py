"""Uniform 1-D mesh and the simulation state carried on it.

The model evolves three fields on a uniform grid over [L1, L2] with
homogeneous Dirichlet boundaries: a complex short-wave envelope u, the
deformation gradient v and the long-wave velocity w.  Initial data are
localized pulses that decay fast enough for zero boundary values to be a
faithful truncation of the whole-line problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Grid", "SimState", "BlowUpError", "build_initial_state", "PROFILES",
           "edge_taper", "raw_profile_fields", "raw_edge_magnitude"]

# Carrier wavenumber and pulse widths of the built-in oscillatory profile.
CARRIER_WAVENUMBER = 30.0
ENVELOPE_RATE = np.sqrt(50.0)
PULSE_RATE = np.sqrt(20.0)
PULSE_OFFSET = 0.1

MIN_POINTS_PER_WAVELENGTH = 8

# fraction of the domain length used to taper built-in profiles to zero at
# each edge (0.25 length units on the default [-2, 2] domain)
EDGE_TAPER_FRACTION = 0.0625


class BlowUpError(RuntimeError):
    """A field stopped being finite; the computation cannot continue."""


@dataclass(frozen=True)
class Grid:
    """Uniform nodes x_j = L1 + j*h, j = 0..J, with x_J = L2.

    J is the number of cells, so there are J + 1 nodes.
    """

    L1: float
    L2: float
    J: int

    def __post_init__(self):
        if not self.L1 < self.L2:
            raise ValueError(f"domain endpoints must satisfy L1 < L2, got [{self.L1}, {self.L2}]")
        if self.J < 4 or int(self.J) != self.J:
            raise ValueError(f"cell count J must be an integer >= 4, got {self.J}")

    @property
    def h(self) -> float:
        return (self.L2 - self.L1) / self.J

    @property
    def n_nodes(self) -> int:
        return self.J + 1

    @property
    def x(self) -> np.ndarray:
        # linspace pins both endpoints exactly
        return np.linspace(self.L1, self.L2, self.J + 1)

    def is_symmetric(self) -> bool:
        return self.L1 == -self.L2


@dataclass
class SimState:
    """Field triple (u, v, w) sampled on one grid at a single time.

    Once a step is accepted the arrays are not mutated again, so a state
    may be handed to diagnostics or output sinks while the next step is
    computed on fresh buffers.
    """

    t: float
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    grid: Grid = field(repr=False)

    @classmethod
    def zeros(cls, grid: Grid, t: float = 0.0) -> "SimState":
        n = grid.n_nodes
        return cls(t=t, u=np.zeros(n, dtype=complex), v=np.zeros(n), w=np.zeros(n), grid=grid)

    def __post_init__(self):
        n = self.grid.n_nodes
        for name in ("u", "v", "w"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"field {name} has {arr.shape[0]} entries, grid expects {n}")

    def copy(self) -> "SimState":
        return SimState(t=self.t, u=self.u.copy(), v=self.v.copy(), w=self.w.copy(), grid=self.grid)

    def snapshot(self) -> "SimState":
        """Deep copy with read-only arrays, safe to share across threads."""
        snap = self.copy()
        for arr in (snap.u, snap.v, snap.w):
            arr.flags.writeable = False
        return snap

    def zero_boundaries(self) -> None:
        self.u[0] = self.u[-1] = 0.0
        self.v[0] = self.v[-1] = 0.0
        self.w[0] = self.w[-1] = 0.0

    def assert_finite(self) -> None:
        for name in ("u", "v", "w"):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)):
                bad = int(np.flatnonzero(~np.isfinite(arr))[0])
                raise BlowUpError(
                    f"non-finite value in field {name} at node {bad} "
                    f"(x = {self.grid.x[bad]:.6g}, t = {self.t:.6g})"
                )

    def max_abs(self) -> tuple[float, float, float]:
        return (
            float(np.max(np.abs(self.u))),
            float(np.max(np.abs(self.v))),
            float(np.max(np.abs(self.w))),
        )


def sech_pulse_fields(x: np.ndarray, amplitude: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Built-in oscillatory initial data: a carrier-modulated sech envelope
    for u and two mirrored sech pulses for v and w, offset by +-0.1."""
    u = amplitude * np.exp(1j * CARRIER_WAVENUMBER * x) / np.cosh(ENVELOPE_RATE * x)
    v = amplitude / np.cosh(PULSE_RATE * (x - PULSE_OFFSET))
    w = amplitude / np.cosh(PULSE_RATE * (x + PULSE_OFFSET))
    return u, v, w


def gaussian_fields(x: np.ndarray, amplitude: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smooth non-oscillatory pulses, handy for convergence experiments."""
    u = amplitude * np.exp(-4.0 * x**2) + 0j
    v = amplitude * np.exp(-4.0 * (x - PULSE_OFFSET) ** 2)
    w = amplitude * np.exp(-4.0 * (x + PULSE_OFFSET) ** 2)
    return u, v, w


PROFILES = ("sech-pulses", "zero", "gaussian", "table")


def edge_taper(x: np.ndarray, L1: float, L2: float) -> np.ndarray:
    """C1 cutoff: 1 in the interior, sin^2-smooth to exactly 0 at each edge.

    Bare clamping of a profile's sub-tolerance tail leaves a derivative
    kink whose gradient energy (about tail^2 / h) sits flat across the
    stiffest modes, where the time stepper dissipates it outside the
    energy bookkeeping; the smooth taper removes that floor.
    """
    width = EDGE_TAPER_FRACTION * (L2 - L1)
    s_right = np.clip((L2 - x) / width, 0.0, 1.0)
    s_left = np.clip((x - L1) / width, 0.0, 1.0)
    return np.sin(0.5 * np.pi * s_right) ** 2 * np.sin(0.5 * np.pi * s_left) ** 2


def raw_profile_fields(config, x: np.ndarray):
    """The configured profile sampled at x, before the edge taper."""
    amp = config.amplitude
    profile = config.profile
    if profile == "sech-pulses":
        return sech_pulse_fields(x, amp)
    if profile == "zero":
        return (np.zeros_like(x, dtype=complex), np.zeros_like(x), np.zeros_like(x))
    if profile == "gaussian":
        return gaussian_fields(x, amp)
    if profile == "table":
        from . import io as iomod

        if config.profile_table is None:
            raise ValueError("profile 'table' requires a snapshot file path")
        return iomod.read_snapshot_fields(config.profile_table, config.grid)
    raise ValueError(f"unknown initial profile {profile!r}; choose one of {PROFILES}")


def build_initial_state(config) -> SimState:
    """Sample the configured initial profile on the grid and bring it to
    zero at the boundaries (smooth edge taper for the built-in analytic
    profiles, plain clamp for tabulated data).

    Raises ValueError for unknown profile names and for grids too coarse
    to resolve the carrier oscillation (fewer than 8 points per
    wavelength), unless ``config.allow_coarse_grid`` is set.
    """
    grid: Grid = config.grid
    x = grid.x

    if config.profile == "sech-pulses":
        _check_carrier_resolution(grid, config.allow_coarse_grid)

    u, v, w = raw_profile_fields(config, x)
    u = np.ascontiguousarray(u, dtype=complex)
    v = np.ascontiguousarray(v, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)

    if config.profile in ("sech-pulses", "gaussian"):
        chi = edge_taper(x, grid.L1, grid.L2)
        u *= chi
        v *= chi
        w *= chi

    state = SimState(t=0.0, u=u, v=v, w=w, grid=grid)
    state.zero_boundaries()
    return state


def _check_carrier_resolution(grid: Grid, allow_coarse: bool) -> None:
    points_per_wavelength = 2.0 * np.pi / (CARRIER_WAVENUMBER * grid.h)
    if points_per_wavelength < MIN_POINTS_PER_WAVELENGTH and not allow_coarse:
        raise ValueError(
            f"grid resolves the carrier with only {points_per_wavelength:.2f} points per "
            f"wavelength (< {MIN_POINTS_PER_WAVELENGTH}); refine the grid or set "
            "allow_coarse_grid"
        )


def raw_edge_magnitude(config) -> float:
    """Largest untapered field magnitude at the boundary nodes; must be
    negligible for zero boundary conditions to be a faithful truncation."""
    grid: Grid = config.grid
    if config.profile == "table":
        u, v, w = raw_profile_fields(config, grid.x)
        u, v, w = u[[0, -1]], v[[0, -1]], w[[0, -1]]
    else:
        edges = np.array([grid.L1, grid.L2])
        u, v, w = raw_profile_fields(config, edges)
    return float(max(np.max(np.abs(u)), np.max(np.abs(v)), np.max(np.abs(w))))
