"""`migrate`: bring the run archive schema to head."""
from __future__ import annotations

import argparse
import logging

from ..config import settings
from ..migrations import run_sync_migrations
from . import EXIT_USAGE, Command, Outcome

logger = logging.getLogger(__name__)


def configure(parser: argparse.ArgumentParser) -> None:
    pass


def migrate_command(args: argparse.Namespace) -> Outcome:
    url = args.archive or settings.ARCHIVE_URL
    logger.info("Running migrations...")
    if not run_sync_migrations(url):
        return Outcome(None, ["Migrations failed, see the log"], EXIT_USAGE, "failed")
    logger.info("Migrations finished.")
    return Outcome(None, [f"Archive schema is at head ({url})"])


def get_migrate_commands() -> list[Command]:
    return [
        Command("migrate", "apply archive migrations (uses --archive or SURPLAB_ARCHIVE_URL)", configure, migrate_command),
    ]
