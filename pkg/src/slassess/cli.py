"""Command line entry point.

Subcommands:

``assess``    run the assessment and write per-pair record CSVs plus a manifest
``synth``     write synthetic per-system trajectory CSVs from a ``[synth]`` table
``plotdata``  write wide ``step,t,delta,uncertainty,threshold,flagged`` CSVs,
              either from an existing report (``--report``) or a fresh run

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import RunConfig, load_config
from .errors import ConfigError, DataError
from .pipeline import run_assess, run_synth
from .report import PLOTDATA_DIR, emit_plotdata, read_report, write_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

log = logging.getLogger("slassess")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slassess", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, config_required=True):
        p.add_argument("--config", type=Path, required=config_required,
                       help="run configuration (TOML, or a manifest.json from a previous run)")
        p.add_argument("--out", type=Path, help="output directory (overrides out_dir)")
        p.add_argument("--seed", type=int, help="override the configured seed")

    common(sub.add_parser("assess", help="assess all ordered system pairs"))
    common(sub.add_parser("synth", help="write synthetic trajectories"))
    p = sub.add_parser("plotdata", help="write plot-ready series per pair")
    common(p, config_required=False)
    p.add_argument("--report", type=Path, help="directory written by 'assess'")
    return parser


def _configure(args) -> RunConfig:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.out is not None:
        config = replace(config, out_dir=args.out.resolve())
    if config.out_dir is None:
        raise ConfigError(f"{args.config}: no out_dir configured and no --out given")
    return config


def _assess(args) -> int:
    config = _configure(args)
    report = run_assess(config)
    write_report(report, config.out_dir)
    log.info("wrote %d pair files to %s", len(report.pairs), config.out_dir)
    return EXIT_OK


def _synth(args) -> int:
    config = _configure(args)
    paths = run_synth(config, config.out_dir)
    log.info("wrote %d trajectories to %s", len(paths), config.out_dir)
    return EXIT_OK


def _plotdata(args) -> int:
    if args.report is not None:
        if args.config is not None:
            raise ConfigError("give either --report or --config, not both")
        out = args.out if args.out is not None else args.report / PLOTDATA_DIR
        try:
            report = read_report(args.report)
        except OSError as exc:
            raise DataError(f"{args.report}: cannot read report ({exc})") from None
    elif args.config is not None:
        config = _configure(args)
        report = run_assess(config)
        out = config.out_dir
    else:
        raise ConfigError("plotdata needs --report or --config")
    emit_plotdata(report, out)
    log.info("wrote plot data for %d pairs to %s", len(report.pairs), out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    handler = {"assess": _assess, "synth": _synth, "plotdata": _plotdata}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"slassess: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"slassess: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        name = exc.filename if exc.filename else ""
        print(f"slassess: I/O error: {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
