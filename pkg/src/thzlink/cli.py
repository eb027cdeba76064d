"""Command line entry point: ``thzlink <subcommand> [options]``."""

import argparse
import logging
import sys

from .config import load_config
from .exceptions import ConfigError, NumericalError, ParameterError
from .experiments import EXPERIMENTS
from .io import write_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_LOW_CONFIDENCE = 4

log = logging.getLogger("thzlink")


def build_parser():
    parser = argparse.ArgumentParser(prog="thzlink", description="Terahertz link simulator and SNR calculator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="TOML experiment file")
        p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
        p.add_argument("--symbols", type=int, help="symbol budget per Monte Carlo point")
        p.add_argument("--out", default="results", help="output directory for CSV files")
        p.add_argument("--workers", type=int, help="parallel worker processes")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a configuration entry, e.g. photonics.rin_db=-150")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _has_nan_analytics(table):
    # NaN in a penalty means "no crossing", which is a result rather than a failure.
    skip = {"penalty_db", "p_rx_at_target_dbm"}
    for j, name in enumerate(table.columns):
        if name in skip:
            continue
        for row in table.rows:
            v = row[j]
            if isinstance(v, float) and v != v:
                return True
    return False


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config, args.overrides, seed=args.seed, symbols=args.symbols, workers=args.workers)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        tables = EXPERIMENTS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    low_confidence = False
    nan_seen = False
    for table in tables:
        path = write_table(table, args.out)
        log.info("wrote %s (%d rows)", path, len(table.rows))
        if "low_confidence" in table.columns:
            low_confidence |= any(int(v) for v in table.column("low_confidence"))
        nan_seen |= _has_nan_analytics(table)
    if nan_seen:
        print("numerical failure: NaN in results", file=sys.stderr)
        return EXIT_NUMERICAL
    if low_confidence:
        print("warning: some points have fewer than 100 bit errors", file=sys.stderr)
        return EXIT_LOW_CONFIDENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
