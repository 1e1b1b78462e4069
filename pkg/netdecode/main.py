"""
Command-line entry point: bound | verify | search | report
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from netdecode import __version__
from netdecode.core.config import settings
from netdecode.core.exceptions import NetDecodeException
from netdecode.schemas.report import RowStatus
from netdecode.services.harness import (
    ResultCache,
    cmd_bound,
    cmd_report,
    cmd_search,
    cmd_verify,
    load_scenario,
    render,
    write_report,
)
from netdecode.utils.helpers import format_duration
from netdecode.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the table to this file instead of stdout")
    parser.add_argument("--format", choices=["csv", "md", "json"], help="table format (default: scenario option or csv)")
    parser.add_argument("--timeout", type=float, help="search time budget in seconds")
    parser.add_argument("--workers", type=int, help="worker threads for confusability graphs")
    parser.add_argument("--seed", type=int, help="sweep visiting-order seed")
    parser.add_argument("--cache", help="results cache file")
    parser.add_argument("--log-level", help="loguru level (DEBUG, INFO, ...)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netdecode",
        description="Adversarial network decoding: cut-set bounds, code verification and exact capacity search",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("bound", "Singleton cut-set bound"),
        ("verify", "check a code for unambiguity"),
        ("search", "largest unambiguous code (fixed scheme or exhaustive sweep)"),
    ):
        command = sub.add_parser(name, help=text)
        command.add_argument("--scenario", required=True, help="scenario JSON file")
        _add_common(command)

    report = sub.add_parser("report", help="run scenario files and directories into one table")
    report.add_argument("paths", nargs="*", help="scenario files or directories")
    report.add_argument("--scenario", action="append", default=[], help="scenario file (repeatable)")
    _add_common(report)
    return parser


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(log_level=args.log_level)
    cache = ResultCache(args.cache) if args.cache else None

    try:
        if args.command == "report":
            paths = list(args.scenario) + list(args.paths)
            rows, exit_code = cmd_report(paths, cache=cache, timeout=args.timeout, workers=args.workers, seed=args.seed)
            fmt = args.format or "csv"
            if args.out:
                for path in write_report(rows, args.out, fmt):
                    logger.info(f"wrote {path}")
            else:
                _emit(render(rows, fmt), None)
            return exit_code

        scenario = load_scenario(args.scenario)
        if args.command == "bound":
            row = cmd_bound(scenario)
        elif args.command == "verify":
            row = cmd_verify(scenario)
        else:
            row = cmd_search(
                scenario,
                cache=cache or ResultCache(settings.cache_file),
                timeout=args.timeout,
                workers=args.workers,
                seed=args.seed,
            )
    except NetDecodeException as e:
        logger.error(f"{e.message} code={e.code} details={e.details}")
        return EXIT_ERROR

    witness = row.details.get("witness")
    if witness:
        sys.stderr.write(
            f"witness: {witness['first']} and {witness['second']} share output {witness['output']}\n"
        )
    _emit(render([row], args.format or scenario.options.format), args.out)
    logger.info(f"{row.scenario_id}: {row.status.value} in {format_duration(row.wall_ms)}")
    return EXIT_MISMATCH if row.status == RowStatus.MISMATCH else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
