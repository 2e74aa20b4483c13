"""Record finished CLI runs into the SQL archive."""
from __future__ import annotations

import logging
from typing import Sequence

from sqlalchemy import select
from sqlalchemy.orm import Session

from .database import get_session_factory
from .migrations import run_sync_migrations
from .models import GraphRecord, Run, SuiteOutcome
from .report import Report, dumps
from .verification import SuiteResult

logger = logging.getLogger(__name__)


def ensure_graph(session: Session, digest: str, n: int, m: int) -> GraphRecord:
    """Retrieve a graph row by digest or create one if not exists"""
    stmt = select(GraphRecord).where(GraphRecord.digest == digest)
    graph: GraphRecord | None = session.scalar(stmt)
    if not graph:
        graph = GraphRecord(digest=digest, n=n, m=m)
        session.add(graph)
        session.flush()  # flush to get graph.id without committing
    return graph


def record_run(
    session: Session,
    report: Report,
    status: str,
    exit_code: int,
    suites: Sequence[SuiteResult] = (),
) -> Run:
    run = Run(
        command=report.command,
        tool_version=report.tool_version,
        status=status,
        exit_code=exit_code,
        seconds=report.timing.get("seconds"),
        report_json=dumps(report),
    )
    summary = report.findings.get("graph")
    if report.input_digest and summary is not None:
        run.graph = ensure_graph(session, report.input_digest, summary["n"], summary["m"])
    run.suites = [
        SuiteOutcome(suite=s.name, passed=s.passed, total=s.total, tolerance=s.tolerance, seed=str(s.seed))
        for s in suites
    ]
    session.add(run)
    session.flush()
    return run


def archive_report(
    url: str,
    report: Report,
    status: str,
    exit_code: int,
    suites: Sequence[SuiteResult] = (),
) -> int | None:
    """Bring the archive schema to head and store one run; returns the run id or None on failure."""
    if not run_sync_migrations(url):
        return None
    Session_ = get_session_factory(url)
    try:
        with Session_() as session, session.begin():
            run = record_run(session, report, status, exit_code, suites)
            run_id = run.id
    except Exception as e:
        logger.error(f"Failed to archive {report.command} run: {e}", exc_info=True)
        return None
    logger.info(f"Archived {report.command} run #{run_id} ({status})")
    return run_id
