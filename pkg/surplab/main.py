"""Entry point for the surplab command line."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Sequence

import humanize

from . import __version__
from .archive import archive_report
from .commands import EXIT_USAGE, Command, UsageError
from .commands.certify import get_certify_commands
from .commands.extract import get_extract_commands
from .commands.gen import get_gen_commands
from .commands.maxcut import get_maxcut_commands
from .commands.migrate import get_migrate_commands
from .commands.spectrum import get_spectrum_commands
from .commands.stability import get_stability_commands
from .commands.verify import get_verify_commands
from .config import settings
from .generators import SpecError
from .graph import GraphFormatError
from .report import write_report
from .spectral import ConvergenceError, SpectralInvariantError
from .surplus import OracleLimitError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64

# ожидаемые ошибки ввода и численные сбои: код 1 без трейсбека
INPUT_ERRORS = (
    UsageError,
    GraphFormatError,
    SpecError,
    OracleLimitError,
    ConvergenceError,
    SpectralInvariantError,
    ValueError,
    OSError,
)


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    logging.getLogger().setLevel(level.upper())
    logging.getLogger("sqlalchemy.engine").setLevel(logging.WARNING)
    logging.getLogger("alembic").setLevel(logging.WARNING)


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < SEED_LIMIT:
        raise argparse.ArgumentTypeError(f"must be in [0, 2^64), got {value}")
    return value


def _workers(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def all_commands() -> list[Command]:
    return [
        *get_maxcut_commands(),
        *get_certify_commands(),
        *get_spectrum_commands(),
        *get_extract_commands(),
        *get_stability_commands(),
        *get_gen_commands(),
        *get_verify_commands(),
        *get_migrate_commands(),
    ]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the full JSON report here")
    common.add_argument("--archive", metavar="URL", help="SQLAlchemy URL of the run archive")
    common.add_argument("--workers", type=_workers, default=settings.WORKERS,
                        help="parallel workers for exact search (default: SURPLAB_WORKERS)")
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed for every random choice")
    common.add_argument("--log-level", default=settings.LOG_LEVEL,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR", "debug", "info", "warning", "error"))

    parser = argparse.ArgumentParser(
        prog="surplab",
        description="MaxCut surplus certificates, dense-subgraph extraction and clique-union stability.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for cmd in all_commands():
        p = sub.add_parser(cmd.name, help=cmd.help, parents=[common])
        cmd.configure(p)
        p.set_defaults(handler=cmd)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run one command and return its exit code (0 ok, 1 usage/input, 2 not certified)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help и --version выходят с кодом 0, ошибки argparse приводим к 1
        return 0 if e.code in (0, None) else EXIT_USAGE

    setup_logging(args.log_level)
    cmd: Command = args.handler
    started = time.perf_counter()
    try:
        outcome = cmd.run(args)
    except INPUT_ERRORS as e:
        logger.error(f"{cmd.name}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"{cmd.name} failed: {e}", exc_info=True)
        return EXIT_USAGE
    elapsed = time.perf_counter() - started

    report = outcome.report
    if report is not None:
        report.set_timing(elapsed)
        if args.json:
            try:
                write_report(report, args.json)
            except OSError as e:
                logger.error(f"Cannot write report to {args.json}: {e}")
                return EXIT_USAGE
            logger.info(f"Report written to {args.json}")

    for line in outcome.summary:
        print(line)
    logger.info(f"{cmd.name} finished in {humanize.precisedelta(elapsed, minimum_unit='milliseconds')}")

    url = args.archive or settings.ARCHIVE_URL
    if report is not None and url:
        archive_report(url, report, outcome.status, outcome.exit_code, outcome.suites)
    return outcome.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
