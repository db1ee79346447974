"""Command-line front end: scan runs, figure reproduction and self-checks.

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .scenarios import PRESET_NAMES, UnknownPreset, preset, run_scenario
from .steady import DegenerateSteadyState, SolverFailure, StepTooLarge, ZeroProbe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4

_PRESET_BLURBS = {
    "fig2": "bare double-Lambda scan, resonant coupling, no broadening",
    "fig3": "fig2 with Doppler averaging at 320 K",
    "fig4_direct": "fig3 plus direct atom-exchange decay (rate 0.01)",
    "fig4_effective": "fig3 plus effective ground-exchange decay (rate 0.01)",
    "fig5a": "resonant coupling, no broadening (decay-free overlay baseline)",
    "fig5b": "coupling centered between the excited states (delta_c = omega43/2)",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vapor-eit",
        description="Steady-state EIT susceptibility scans of a four-level double-Lambda atom.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scan and export the spectrum")
    run_p.add_argument("--preset", help=f"scenario preset ({', '.join(PRESET_NAMES)})")
    run_p.add_argument("--config", help="config file of 'key = value' lines")
    run_p.add_argument(
        "--set",
        dest="sets",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any config key (repeatable)",
    )
    run_p.add_argument("--out", required=True, help="output file path")
    run_p.add_argument("--format", choices=("csv", "json"), default="csv")
    run_p.add_argument("--workers", type=int, default=1, metavar="N")
    run_p.add_argument("--grid", metavar="MIN:MAX:COUNT", help="delta scan grid override")

    rep_p = sub.add_parser("reproduce-figures", help="run all presets and write CSVs, metrics and PNGs")
    rep_p.add_argument("--out-dir", default="figures", help="output directory")
    rep_p.add_argument("--workers", type=int, default=1, metavar="N")
    rep_p.add_argument("--grid", metavar="MIN:MAX:COUNT", help="delta scan grid override")
    rep_p.add_argument("--no-plots", action="store_true", help="skip PNG rendering")

    sub.add_parser("presets", help="list available presets")

    val_p = sub.add_parser("validate", help="run the solver-versus-oracle cross-checks")
    val_p.add_argument("--fast", action="store_true", help="reduced sampling")

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = parse_config(
        preset_name=args.preset,
        config_path=args.config,
        set_pairs=args.sets,
        grid_spec=args.grid,
        out=args.out,
        fmt=args.format,
        workers=args.workers,
    )
    spectrum = run_scenario(cfg.scenario, workers=cfg.workers)
    from .io import export_spectrum

    export_spectrum(spectrum, cfg.fmt, cfg.out, scenario=cfg.scenario)
    print(f"wrote {cfg.out} ({len(spectrum)} points, scenario {cfg.scenario.name})")
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace) -> int:
    from .config import parse_grid_spec
    from .io import reproduce_figures

    grid = None
    if args.grid:
        import numpy as np

        spec = parse_grid_spec(args.grid)
        grid = np.linspace(spec["grid.min"], spec["grid.max"], spec["grid.count"])
    summary = reproduce_figures(
        Path(args.out_dir), workers=args.workers, delta_grid=grid, make_plots=not args.no_plots
    )
    for name, entry in summary["curves"].items():
        metrics = entry["metrics"]
        print(
            f"{name}: dip_depth={metrics['dip_depth']:.4g} "
            f"transparent={metrics['is_transparent']} -> {entry['csv']}"
        )
    for name, message in summary["errors"].items():
        print(f"{name}: FAILED ({message})", file=sys.stderr)
    print(f"summary written to {Path(args.out_dir) / 'summary.json'}")
    return EXIT_SOLVER if summary["errors"] else EXIT_OK


def _cmd_presets() -> int:
    for name in PRESET_NAMES:
        scenario = preset(name)
        tags = []
        if scenario.doppler is not None:
            tags.append(f"Doppler {scenario.doppler.temperature:g} K")
        if scenario.exchange.kind != "none":
            tags.append(f"exchange {scenario.exchange.kind} {scenario.exchange.rate:g}")
        suffix = f" [{', '.join(tags)}]" if tags else ""
        print(f"{name:15s} {_PRESET_BLURBS[name]}{suffix}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    from .validate import run_all_checks

    results = run_all_checks(fast=args.fast)
    for result in results:
        print(result.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_SOLVER


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "reproduce-figures":
            return _cmd_reproduce(args)
        if args.command == "presets":
            return _cmd_presets()
        if args.command == "validate":
            return _cmd_validate(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, UnknownPreset) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateSteadyState, SolverFailure, StepTooLarge, ZeroProbe) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
