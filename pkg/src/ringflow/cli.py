"""Command-line interface.

Subcommands:

    simulate   uncontrolled baseline propagation
    optimize   full incentivize-and-control pipeline
    preset     run a named experiment preset
    check      validate a configuration file and exit

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
numerical failures (solver breakdowns, bound violations).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .config import ConfigError, ExperimentConfig, parse_config, serialize_config, with_overrides
from .domain import BoundViolationError, CflViolationError, build_grid
from .optimizer import ProgressRecord
from .outputs import write_outputs
from .presets import PRESET_NAMES, run_experiment, run_preset
from .socp import InfeasibleProblemError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


def _load_config(path: Optional[str]) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _apply_flag_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    for flag, key in (("cost", "cost_kind"), ("splits", "horizon_splits"),
                      ("flow_cap", "flow_cap"), ("nx", "nx"),
                      ("density_cap_mode", "density_cap_mode"),
                      ("initial_split_mode", "initial_split_mode"),
                      ("budget_renewal", "budget_renewal"),
                      ("out", "out_dir")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "svg", False):
        overrides["emit_svg"] = True
    return with_overrides(cfg, **overrides) if overrides else cfg


def _progress_printer(record: ProgressRecord) -> None:
    print(f"window {record.window} iteration {record.iteration}: "
          f"objective {record.objective:.6e}, rel-change {record.rel_change:.2e}",
          file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ringflow",
        description="Incentivized mixed-traffic density control on a ring road")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--svg", action="store_true", help="also write SVG charts")

    sub.add_parser("simulate", parents=[common],
                   help="uncontrolled baseline propagation")

    p_opt = sub.add_parser("optimize", parents=[common],
                           help="full incentivize-and-control pipeline")
    p_opt.add_argument("--cost", choices=("l2", "hm1"), help="state cost kind")
    p_opt.add_argument("--splits", type=int, metavar="N",
                       help="receding-horizon split count")
    p_opt.add_argument("--flow-cap", dest="flow_cap", type=float,
                       help="upper bound on the controlled flux")
    p_opt.add_argument("--nx", type=int, help="number of grid cells")
    p_opt.add_argument("--density-cap-mode", dest="density_cap_mode",
                       choices=("max-density", "mean-density"))
    p_opt.add_argument("--initial-split-mode", dest="initial_split_mode",
                       choices=("free", "paper-literal"))
    p_opt.add_argument("--budget-renewal", dest="budget_renewal",
                       choices=("renew", "no-renew"))
    p_opt.add_argument("--verbose", action="store_true",
                       help="print per-iteration progress to stderr")

    p_pre = sub.add_parser("preset", help="run a named experiment preset")
    p_pre.add_argument("name", choices=PRESET_NAMES)
    p_pre.add_argument("--out", help="output directory")
    p_pre.add_argument("--svg", action="store_true")

    p_chk = sub.add_parser("check", help="validate a configuration file")
    p_chk.add_argument("--config", help="JSON configuration file")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        cfg = _load_config(getattr(args, "config", None))
    except OSError as exc:
        print(f"error: cannot read configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "check":
            print("configuration ok")
            print(serialize_config(cfg), end="")
            return EXIT_OK

        if args.command == "preset":
            summaries = run_preset(args.name, out_dir=args.out,
                                   emit_svg=args.svg or None)
            for summary in summaries:
                print(f"{summary.label}: terminal normalized L2 "
                      f"{summary.terminal_normalized_l2:.6f}, "
                      f"max m2 {summary.max_m2:.4f}")
            return EXIT_OK

        cfg = _apply_flag_overrides(cfg, args)
        uncontrolled = args.command == "simulate"
        progress = _progress_printer if getattr(args, "verbose", False) else None
        label = "baseline" if uncontrolled else f"{cfg.cost_kind}-n{cfg.horizon_splits}"
        summary, run = run_experiment(cfg, label, uncontrolled=uncontrolled,
                                      progress=progress)
        grid = build_grid(cfg.to_params(), nx=cfg.nx, cfl=cfg.cfl)
        paths = write_outputs(summary, run, grid, cfg.out_dir,
                              emit_svg=cfg.emit_svg)
        print(f"{label}: terminal normalized L2 {summary.terminal_normalized_l2:.6f}, "
              f"max m2 {summary.max_m2:.4f}, wall {summary.wall_time:.1f}s")
        for p in paths:
            print(f"wrote {p}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleProblemError, BoundViolationError, CflViolationError,
            FloatingPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
