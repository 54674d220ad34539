"""File formats: run configs, snapshots, diagnostics series, manifests.

Everything is plain text.  Snapshots and diagnostics are comma-separated
with a fixed header and 17 significant digits, so writing is deterministic
and a parse-write round trip reproduces the doubles exactly.  The manifest
is JSON with sorted keys and echoes every resolved configuration value.
"""

from __future__ import annotations

import configparser
import json
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, SimConfig, ViscositySpec
from .grid import Grid, SimState
from .kernels import KernelSpec, ResolventTable, solve_resolvent
from .stress import make_stress_model

__all__ = [
    "parse_config",
    "parse_kernel",
    "parse_viscosity",
    "write_snapshot",
    "read_snapshot",
    "read_snapshot_fields",
    "write_diagnostics",
    "write_manifest",
    "write_resolvent_table",
    "run_to_files",
]

SNAPSHOT_HEADER = "x, re_u, im_u, abs_u, v, w"

# schema: section -> key -> parser
_BOOL = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}") from None


def _parse_floats(text: str) -> tuple:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


CONFIG_SCHEMA = {
    "domain": {"left": float, "right": float, "j": int, "h": float},
    "time": {
        "dt": str,
        "t_end": float,
        "snapshot_times": _parse_floats,
        "safety_factor": float,
        "allow_unstable_dt": _parse_bool,
    },
    "model": {
        "alpha": float,
        "stress": str,
        "kernel": str,
        "viscosity": str,
        "coupling": str,
        "memory_rule": str,
    },
    "initial": {
        "profile": str,
        "amplitude": float,
        "table": str,
        "allow_coarse_grid": _parse_bool,
        "boundary_tol": float,
    },
    "output": {
        "directory": str,
        "diagnostics_every": int,
        "work_accumulation": str,
    },
}


def parse_kernel(token: str) -> KernelSpec:
    """Kernel selectors: 'exp1', 'exp:RATE' / 'exponential:RATE',
    'constant:VALUE', 'zero', 'table:PATH' (two-column t, k)."""
    token = token.strip()
    if token == "exp1":
        return KernelSpec.exponential(1.0)
    if token == "zero":
        return KernelSpec.constant(0.0)
    head, _, arg = token.partition(":")
    if head in ("exp", "exponential"):
        return KernelSpec.exponential(float(arg) if arg else 1.0)
    if head == "constant":
        if not arg:
            raise ConfigError("constant kernel needs a value, e.g. constant:0.5")
        return KernelSpec.constant(float(arg))
    if head == "table":
        data = np.loadtxt(arg, delimiter=None)
        return KernelSpec.table(data[:, 0], data[:, 1])
    raise ConfigError(f"unknown kernel {token!r}")


def parse_viscosity(token: str) -> ViscositySpec:
    """Viscosity selectors: 'scaled', 'undivided', 'physical:EPS'."""
    token = token.strip()
    head, _, arg = token.partition(":")
    if head in ("scaled", "undivided"):
        return ViscositySpec(mode=head)
    if head == "physical":
        if not arg:
            raise ConfigError("physical viscosity needs a value, e.g. physical:0.01")
        return ViscositySpec(mode="physical", eps=float(arg))
    raise ConfigError(f"unknown viscosity {token!r}")


def parse_config(path) -> tuple[SimConfig, dict]:
    """Read and validate an INI-style run configuration.

    Unknown sections or keys are hard errors.  Returns the validated
    config and the output options (directory, cadence).
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    values: dict[str, dict] = {}
    for section in parser.sections():
        if section not in CONFIG_SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in CONFIG_SCHEMA[section]:
                raise ConfigError(f"{path}: unknown key '{key}' in section [{section}]")
            try:
                values[section][key] = CONFIG_SCHEMA[section][key](raw)
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(f"{path}: bad value for [{section}] {key}: {exc}") from exc

    dom = values.get("domain", {})
    tim = values.get("time", {})
    mod = values.get("model", {})
    ini = values.get("initial", {})
    out = values.get("output", {})

    left = dom.get("left", -2.0)
    right = dom.get("right", 2.0)
    if "j" in dom and "h" in dom:
        raise ConfigError(f"{path}: give either j or h in [domain], not both")
    if "h" in dom:
        J = int(round((right - left) / dom["h"]))
    else:
        J = dom.get("j", 2000)

    if "t_end" not in tim:
        raise ConfigError(f"{path}: [time] t_end is required")

    dt_raw = tim.get("dt", "auto").strip()
    dt = "auto" if dt_raw == "auto" else float(dt_raw)

    try:
        grid = Grid(left, right, J)
        config = SimConfig(
            grid=grid,
            t_end=tim["t_end"],
            dt=dt,
            alpha=mod.get("alpha", 1.0),
            stress=make_stress_model(mod.get("stress", "cubic")),
            kernel=parse_kernel(mod.get("kernel", "exp1")),
            viscosity=parse_viscosity(mod.get("viscosity", "scaled")),
            coupling=mod.get("coupling", "consistent"),
            memory_rule=mod.get("memory_rule", "rectangle"),
            snapshot_times=tim.get("snapshot_times", ()),
            profile=ini.get("profile", "sech-pulses"),
            amplitude=ini.get("amplitude", 1.0),
            profile_table=ini.get("table"),
            safety_factor=tim.get("safety_factor", 0.5),
            diagnostics_every=out.get("diagnostics_every", 100),
            work_accumulation=out.get("work_accumulation", "cadence"),
            allow_unstable_dt=tim.get("allow_unstable_dt", False),
            allow_coarse_grid=ini.get("allow_coarse_grid", False),
            boundary_decay_tol=ini.get("boundary_tol", 1e-3),
        )
        config.validate()
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    output = {"directory": out.get("directory", path.stem + "_out")}
    return config, output


# ---------------------------------------------------------------------------
# snapshots
# ---------------------------------------------------------------------------


def write_snapshot(state: SimState, grid: Grid, path) -> Path:
    """One row per node: x, re_u, im_u, abs_u, v, w at full precision."""
    path = Path(path)
    x = grid.x
    lines = [SNAPSHOT_HEADER]
    for j in range(grid.n_nodes):
        lines.append(
            f"{x[j]:.17g}, {state.u[j].real:.17g}, {state.u[j].imag:.17g}, "
            f"{abs(state.u[j]):.17g}, {state.v[j]:.17g}, {state.w[j]:.17g}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def read_snapshot(path) -> dict:
    """Parse a snapshot into named columns."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if header != SNAPSHOT_HEADER:
            raise ValueError(f"{path}: expected header {SNAPSHOT_HEADER!r}, got {header!r}")
        data = np.loadtxt(fh, delimiter=",")
    data = np.atleast_2d(data)
    names = [c.strip() for c in SNAPSHOT_HEADER.split(",")]
    return {name: data[:, i] for i, name in enumerate(names)}


def read_snapshot_fields(path, grid: Grid):
    """Fields (u, v, w) from a snapshot, checked against the grid."""
    cols = read_snapshot(path)
    if len(cols["x"]) != grid.n_nodes:
        raise ValueError(
            f"{path}: snapshot has {len(cols['x'])} rows, grid expects {grid.n_nodes}")
    if not np.allclose(cols["x"], grid.x, rtol=0, atol=1e-12):
        raise ValueError(f"{path}: snapshot x column does not match the grid")
    u = cols["re_u"] + 1j * cols["im_u"]
    return u, cols["v"].copy(), cols["w"].copy()


def write_diagnostics(records, path) -> Path:
    from .diagnostics import DIAGNOSTIC_COLUMNS

    path = Path(path)
    lines = [", ".join(DIAGNOSTIC_COLUMNS)]
    for rec in records:
        lines.append(", ".join(f"{val:.17g}" for val in rec.as_row()))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_resolvent_table(table: ResolventTable, path) -> Path:
    """Two-column text export (t, q)."""
    path = Path(path)
    lines = [f"{t:.17g} {q:.17g}" for t, q in zip(table.ts, table.q)]
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# manifest and full-run orchestration
# ---------------------------------------------------------------------------


def kernel_provenance(config: SimConfig, dt: float) -> dict:
    """How the resolvent will be represented for this run."""
    kernel = config.kernel
    if kernel.kind == "exponential":
        return {"resolvent": "closed-form",
                "q": f"exp(-{kernel.rate + 1.0:g} t)"}
    if kernel.is_zero:
        return {"resolvent": "closed-form", "q": "0"}
    table = solve_resolvent(kernel, dt_q=dt, T=max(config.t_end, dt * 4))
    return {"resolvent": "numeric", "dt_q": dt,
            "residual_max": table.residual()}


def write_manifest(path, config: SimConfig, report, snapshot_files) -> Path:
    manifest = {
        "format": "viscowave-run-manifest",
        "version": __version__,
        "config": config.describe(),
        "kernel_provenance": kernel_provenance(config, report.dt),
        "termination": report.termination,
        "steps": report.steps,
        "dt": report.dt,
        "wall_time_seconds": report.wall_time,
        "snapshots": [
            {"file": str(fname), "requested_t": req, "actual_t": act, "step": int(round(act / report.dt))}
            for fname, (req, act, _) in zip(snapshot_files, report.snapshots)
        ],
        "diagnostics_file": "diagnostics.csv",
    }
    if report.blow_up_info:
        manifest["blow_up"] = report.blow_up_info
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def run_to_files(config: SimConfig, outdir) -> tuple:
    """Run a simulation and write snapshots, diagnostics, and the manifest.

    Returns (report, manifest_path).
    """
    from .solver import run

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    report = run(config)

    snapshot_files = []
    for i, (req, act, state) in enumerate(report.snapshots):
        fname = outdir / f"snapshot_{i:02d}.csv"
        write_snapshot(state, config.grid, fname)
        snapshot_files.append(fname.name)

    write_diagnostics(report.diagnostics, outdir / "diagnostics.csv")
    manifest_path = write_manifest(outdir / "manifest.json", config, report, snapshot_files)
    return report, manifest_path
