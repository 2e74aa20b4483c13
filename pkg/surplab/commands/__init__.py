"""CLI commands. Each module exposes get_<name>_commands(); main.py registers them."""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import Callable

from ..report import Report
from ..verification import SuiteResult

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CERTIFIED = 2


class UsageError(ValueError):
    """Bad flag combination or value; the message names the flag."""


@dataclass
class Outcome:
    report: Report | None
    summary: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    status: str = "ok"
    suites: list[SuiteResult] = field(default_factory=list)


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[argparse.Namespace], Outcome]
