"""Command-line entry points: sweep runner, pattern tables, matrix export.

Exit codes: 0 on success, 2 on a configuration error, 3 when more than
half of all trial evaluations failed numerically.
"""

from __future__ import annotations

import argparse
import sys

from .em_model import assemble_impedance, export_impedance
from .errors import ConfigError, ParasimError
from .sweep import (PatternConfig, failure_fraction, load_config,
                    load_pattern_config, run_pattern_fixedload,
                    run_pattern_maxgain, run_sweep, write_pattern_csv,
                    write_sweep_csv, _fixed_geometry)

FAILURE_RATE_LIMIT = 0.5


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg, _ = load_config(args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    result = run_sweep(cfg, workers=args.workers)
    write_sweep_csv(result, args.out)
    frac = failure_fraction(result)
    if frac > FAILURE_RATE_LIMIT:
        print(f"warning: {frac:.1%} of trial evaluations failed",
              file=sys.stderr)
        return 3
    return 0


def _pattern_echo(cfg: PatternConfig, mode: str) -> dict:
    echo = cfg.sweep.echo()
    echo["mode"] = mode
    echo["theta_deg"] = [cfg.theta_start_deg, cfg.theta_stop_deg,
                         cfg.theta_points]
    return echo


def _cmd_pattern(args: argparse.Namespace) -> int:
    cfg = load_pattern_config(args.config)
    if args.mode == "maxgain":
        rows = run_pattern_maxgain(cfg)
        header = ("theta_deg", "g_closed_form", "g_oracle")
    else:
        rows = run_pattern_fixedload(cfg)
        header = ("theta_deg", "pattern_db")
    write_pattern_csv(rows, header, _pattern_echo(cfg, args.mode), args.out)
    return 0


def _cmd_zmatrix(args: argparse.Namespace) -> int:
    cfg, _ = load_config(args.geom)
    geom = _fixed_geometry(cfg)
    z = assemble_impedance(geom)
    export_impedance(z, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parasim",
        description="Beamforming simulations for hybrid reconfigurable "
                    "parasitic dipole arrays")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep")
    p_sweep.add_argument("--config", required=True, help="JSON config file")
    p_sweep.add_argument("--trials", type=int, default=None,
                         help="override configured trial count")
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="override configured seed")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="worker processes for trial evaluation")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_pat = sub.add_parser("pattern", help="emit a beam-pattern table")
    p_pat.add_argument("--config", required=True, help="JSON config file")
    p_pat.add_argument("--mode", required=True,
                       choices=("maxgain", "fixedload"))
    p_pat.add_argument("--out", required=True, help="output CSV path")
    p_pat.set_defaults(func=_cmd_pattern)

    p_z = sub.add_parser("zmatrix",
                         help="export the analytic impedance matrix")
    p_z.add_argument("--geom", required=True,
                     help="JSON config file holding geometry and dipole")
    p_z.add_argument("--out", required=True, help="output zmatrix file")
    p_z.set_defaults(func=_cmd_zmatrix)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ParasimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
