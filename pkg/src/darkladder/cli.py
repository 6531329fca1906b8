"""``darkladder`` command line.

Exit status: 0 on success, 1 on a configuration error, 2 when the run
finished but some grid points (or integration steps) failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .sweep import run_catscan, run_darkstate_report, run_sweep, run_timeevo

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2

log = logging.getLogger("darkladder")


def _n_max_arg(text: str):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'auto'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("n_max must be >= 1")
    return value


def _delta_arg(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number or 'auto'") from None


def _workers_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("workers must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="key = value config file")
    common.add_argument("--out", help="output CSV (default: out_path from config, else stdout)")
    common.add_argument("--n-max", type=_n_max_arg, help="Fock cutoff, or 'auto'")
    common.add_argument("--delta", type=_delta_arg, help="cavity detuning, or 'auto' for delta12 + delta23")
    common.add_argument("--plot", action="store_true", help="also write PNG figures next to the CSV")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="darkladder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", parents=[common], help="steady-state parameter sweep")
    sw.add_argument("--workers", type=_workers_arg, default=1)
    sub.add_parser("timeevo", parents=[common], help="master-equation time series")
    sub.add_parser("darkstates", parents=[common], help="closed-form dark-state table")
    sub.add_parser("catscan", parents=[common], help="analytic vs numerical cat states over theta_rot")
    return parser


def apply_overrides(config: RunConfig, args) -> RunConfig:
    changes = {}
    if args.n_max is not None:
        changes["n_max"] = None if args.n_max == "auto" else args.n_max
    if args.delta is not None:
        changes["params"] = config.params.replace(delta=None if args.delta == "auto" else args.delta)
    if args.out is not None:
        changes["out_path"] = args.out
    return config.replace(**changes) if changes else config


def _execute(command: str, config: RunConfig, workers: int):
    if command == "sweep":
        return run_sweep(config, workers)
    if command == "timeevo":
        return run_timeevo(config)
    if command == "catscan":
        return run_catscan(config)
    n_max = config.n_max if config.n_max is not None else config.params.n_max
    return run_darkstate_report(config.params.replace(n_max=n_max))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = apply_overrides(load_config(args.config), args)
        result = _execute(args.command, config, getattr(args, "workers", 1))
    except (ConfigError, ValueError) as exc:
        print(f"darkladder: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if config.out_path:
        out = Path(config.out_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        result.write(out)
        log.info("wrote %s (%d rows)", out, len(result.rows))
    else:
        sys.stdout.write(result.to_csv())

    if args.plot:
        if not config.out_path:
            print("darkladder: --plot needs an output path", file=sys.stderr)
        else:
            from .plotting import plot_result

            for path in plot_result(result, out.with_suffix("")):
                log.info("wrote %s", path)

    for err in result.errors:
        print(f"darkladder: {err}", file=sys.stderr)
    return EXIT_PARTIAL if result.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
