"""Command line entry point: ``chainscope run`` and ``chainscope validate``."""

from __future__ import annotations

import argparse
import logging
import sys

from chainscope.experiments import SCENARIOS, ConfigError, parse_config, run_scenario
from chainscope.reconstruction import ReconstructionError
from chainscope.spectral import ResolutionError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("chainscope")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write its CSV tables")
    run.add_argument("--scenario", choices=SCENARIOS)
    run.add_argument("--config", help="JSON file with ExperimentConfig fields")
    run.add_argument("--n-sites", type=int, dest="n_sites")
    run.add_argument("--j-low", type=float, dest="j_low")
    run.add_argument("--j-high", type=float, dest="j_high")
    run.add_argument("--delta", type=float)
    run.add_argument("--theta", type=float, nargs="+", dest="theta_list")
    run.add_argument("--sigma", type=float, nargs="+", dest="sigma_list")
    run.add_argument("--samples", type=int, dest="n_samples")
    run.add_argument("--seeds", type=int, dest="n_seeds", help="number of ground-truth chains")
    run.add_argument("--seed", type=int, dest="base_seed")
    run.add_argument("--distance-tol", type=float, dest="distance_tol")
    run.add_argument("--aggregate", choices=("mean", "median"))
    run.add_argument("--no-renormalize", action="store_const", const=False, dest="renormalize")
    run.add_argument("--out", dest="output_dir")
    run.add_argument("--plots", action="store_const", const=True, dest="emit_plots")

    val = sub.add_parser("validate", help="check a config file without running it")
    val.add_argument("file")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "validate":
            cfg = parse_config(args.file)
            print(f"{args.file}: ok (scenario {cfg.scenario})")
            return EXIT_OK
        overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        cfg = parse_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        report = run_scenario(cfg)
    except (ReconstructionError, ResolutionError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for condition, value, distance in report.summary:
        log.info("%s %s  distance %s", condition, format(value, ".6g"), format(distance, "g"))
    log.info("wrote %s/%s", cfg.output_dir, cfg.scenario)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
