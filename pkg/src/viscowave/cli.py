"""Command-line front end.

Subcommands:
  run <config>                 full simulation: snapshots, diagnostics, manifest
  resolvent <kernel> <T> <dt>  tabulate a resolvent kernel as two-column text
  check-stress <model> <lo> <hi>  admissibility report for a stress law
  convergence [<config>]       three-grid spatial and step-refinement report

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
Failures print one machine-readable line 'error[<class>]: <message>'.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError

__all__ = ["main_cli", "console_main"]


def _fail(kind: str, message: str, code: int) -> int:
    print(f"error[{kind}]: {message}", file=sys.stderr)
    return code


def _cmd_run(args) -> int:
    from . import io as iomod

    config, output = iomod.parse_config(args.config)
    outdir = Path(args.outdir) if args.outdir else Path(output["directory"])
    report, manifest = iomod.run_to_files(config, outdir)
    print(f"{report.termination}: {report.steps} steps of dt = {report.dt:.6g} "
          f"in {report.wall_time:.2f} s")
    print(f"manifest: {manifest}")
    if report.termination == "blow-up":
        return _fail("blow-up", report.blow_up_info or "run blew up", 2)
    return 0


def _cmd_resolvent(args) -> int:
    from . import io as iomod
    from .kernels import solve_resolvent

    kernel = iomod.parse_kernel(args.kernel)
    table = solve_resolvent(kernel, dt_q=args.dt, T=args.horizon)
    if args.out:
        iomod.write_resolvent_table(table, args.out)
        print(f"wrote {len(table.ts)} rows to {args.out}")
    else:
        for t, q in zip(table.ts, table.q):
            print(f"{t:.17g} {q:.17g}")
    return 0


def _cmd_check_stress(args) -> int:
    from .stress import check_hypotheses, make_stress_model

    model = make_stress_model(args.model)
    report = check_hypotheses(model, args.lo, args.hi)
    if args.format == "kv":
        for key, val in report.to_record().items():
            print(f"{key} = {val}")
    else:
        print(report.to_text())
    return 0


def _cmd_convergence(args) -> int:
    from . import verification

    J_base = args.base_grid
    if args.config:
        from . import io as iomod

        config, _ = iomod.parse_config(args.config)
        J_base = config.grid.J

    spatial = verification.spatial_order_study((J_base, 2 * J_base, 4 * J_base))
    temporal = verification.temporal_order_study()
    print(spatial.to_text())
    print(temporal.to_text())
    ok = all(1.8 <= o <= 2.2 for o in spatial.orders) and \
        all(3.5 <= o <= 4.5 for o in temporal.orders)
    print("orders within the expected windows" if ok else "orders OUTSIDE expected windows")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viscowave", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a simulation from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--outdir", default=None)

    p_res = sub.add_parser("resolvent", help="tabulate a resolvent kernel")
    p_res.add_argument("kernel", help="exp1 | exponential:RATE | constant:C | zero | table:PATH")
    p_res.add_argument("horizon", type=float)
    p_res.add_argument("dt", type=float)
    p_res.add_argument("--out", default=None)

    p_chk = sub.add_parser("check-stress", help="admissibility report for a stress law")
    p_chk.add_argument("model", help="cubic | linear")
    p_chk.add_argument("lo", type=float)
    p_chk.add_argument("hi", type=float)
    p_chk.add_argument("--format", choices=("text", "kv"), default="text")

    p_cnv = sub.add_parser("convergence", help="manufactured-solution refinement report")
    p_cnv.add_argument("config", nargs="?", default=None)
    p_cnv.add_argument("--base-grid", type=int, default=500)

    return parser


_COMMANDS = {
    "run": _cmd_run,
    "resolvent": _cmd_resolvent,
    "check-stress": _cmd_check_stress,
    "convergence": _cmd_convergence,
}


def main_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail("config", str(exc), 1)
    except FileNotFoundError as exc:
        return _fail("io", str(exc), 2)
    except OSError as exc:
        return _fail("io", str(exc), 2)
    except ValueError as exc:
        return _fail("invalid", str(exc), 1)
    except RuntimeError as exc:
        return _fail("runtime", str(exc), 2)


def console_main() -> None:
    sys.exit(main_cli())


if __name__ == "__main__":
    console_main()
