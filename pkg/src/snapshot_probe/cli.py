"""Command-line front-end: ``snapprobe {sweep,intervals,acrit,check,report}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, report
from .checks import run_all
from .pipeline import ConfigError, ExperimentConfig, run_intervals, run_sweep
from .presets import PRESETS, preset

log = logging.getLogger("snapprobe")


def _common(parser: argparse.ArgumentParser, config: bool = True) -> None:
    if config:
        src = parser.add_mutually_exclusive_group()
        src.add_argument("--config", type=Path, help="experiment config (JSON)")
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
        parser.add_argument("--noiseless", action="store_true", help="infinite-shot tomography")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    parser.add_argument("--strict", action="store_true", help="reject unknown config keys, fail on numeric warnings")
    parser.add_argument("--format", choices=("csv", "svg", "both"), default="csv", dest="fmt")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snapprobe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="bounds and verdicts versus plate thickness")
    _common(p)

    p = sub.add_parser("intervals", help="classify interaction times from amplitude bounds")
    _common(p)
    p.add_argument("--bounds", type=float, nargs=2, metavar=("LO", "HI"), help="amplitude bounds; default: run a sweep")

    p = sub.add_parser("acrit", help="A_crit table, numeric solver and fit")
    _common(p, config=False)
    p.add_argument("--min", type=float, default=0.0, dest="eta_min")
    p.add_argument("--max", type=float, default=20.0, dest="eta_max")
    p.add_argument("--step", type=float, default=0.5)

    p = sub.add_parser("check", help="run the inequality property suites")
    _common(p, config=False)
    p.add_argument("--instances", type=int, default=1000)

    p = sub.add_parser("report", help="render an SVG from a sweep CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("--title", default="")
    return parser


def load_config(args) -> ExperimentConfig:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.noiseless:
        overrides["noiseless"] = True
    if args.out is not None:
        overrides["out_dir"] = str(args.out)
    if args.config is not None:
        with open(args.config) as fh:
            data = json.load(fh)
        return ExperimentConfig.from_dict({**data, **overrides}, strict=args.strict)
    return preset(args.preset or "fig3a", **overrides)


def cmd_sweep(args) -> int:
    cfg = load_config(args)
    rep = run_sweep(cfg, strict=args.strict)
    for path in report.emit(rep, cfg.out_dir, args.fmt, cfg.name):
        print(path)
    return 0


def cmd_intervals(args) -> int:
    cfg = load_config(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.bounds is not None:
        ivals = run_intervals(cfg, bounds=tuple(args.bounds))
    elif cfg.interval_bounds is not None:
        ivals = run_intervals(cfg)
    else:
        ivals = run_intervals(cfg, report=run_sweep(cfg, strict=args.strict))
    stem = f"{cfg.name}_intervals"
    print(report.write_intervals_csv(ivals, out / f"{stem}.csv"))
    if args.fmt in ("svg", "both"):
        print(report.plot_intervals(ivals, out / f"{stem}.svg", cfg.name))
    return 0


def cmd_acrit(args) -> int:
    out = args.out or Path("out")
    out.mkdir(parents=True, exist_ok=True)
    etas = np.arange(args.eta_min, args.eta_max + 0.5 * args.step, args.step)
    rows = report.acrit_table([float(d) for d in etas])
    print(report.write_acrit_csv(rows, out / "acrit.csv"))
    if args.fmt in ("svg", "both"):
        print(report.plot_acrit(rows, out / "acrit.svg"))
    return 0


def cmd_check(args) -> int:
    results = run_all(args.instances, 2024 if args.seed is None else args.seed)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def cmd_report(args) -> int:
    records = report.read_sweep_csv(args.csv)
    print(report.plot_sweep(records, args.csv.with_suffix(".svg"), args.title or args.csv.stem))
    return 0


COMMANDS = {"sweep": cmd_sweep, "intervals": cmd_intervals, "acrit": cmd_acrit, "check": cmd_check, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"snapprobe: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
