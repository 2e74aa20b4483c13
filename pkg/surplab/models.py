"""SQLAlchemy models of the run archive."""
from __future__ import annotations

from datetime import datetime, timezone

from sqlalchemy import DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import Mapped, mapped_column, relationship

from .database import Base


def _now() -> datetime:
    return datetime.now(timezone.utc)


class GraphRecord(Base):
    __tablename__ = "graphs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    digest: Mapped[str] = mapped_column(String(64), unique=True, index=True)  # sha256 канонического текста
    n: Mapped[int] = mapped_column(Integer)
    m: Mapped[int] = mapped_column(Integer)

    runs: Mapped[list["Run"]] = relationship(back_populates="graph")


class Run(Base):
    __tablename__ = "runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), default=_now)
    command: Mapped[str] = mapped_column(String(32), index=True)
    tool_version: Mapped[str] = mapped_column(String(20))
    status: Mapped[str] = mapped_column(String(32))  # ok, certified, not_certified, failed ...
    exit_code: Mapped[int] = mapped_column(Integer)
    seconds: Mapped[float | None] = mapped_column(Float, nullable=True)
    report_json: Mapped[str] = mapped_column(Text)

    graph_id: Mapped[int | None] = mapped_column(
        Integer, ForeignKey("graphs.id", ondelete="SET NULL"), nullable=True
    )
    graph: Mapped[GraphRecord | None] = relationship(back_populates="runs")

    suites: Mapped[list["SuiteOutcome"]] = relationship(
        back_populates="run", cascade="all, delete-orphan"
    )


class SuiteOutcome(Base):
    __tablename__ = "suite_outcomes"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(Integer, ForeignKey("runs.id", ondelete="CASCADE"))

    suite: Mapped[str] = mapped_column(String(32), index=True)
    passed: Mapped[int] = mapped_column(Integer)
    total: Mapped[int] = mapped_column(Integer)
    tolerance: Mapped[float] = mapped_column(Float)
    seed: Mapped[str] = mapped_column(String(20))  # 64-битный беззнаковый, не влезает в BIGINT

    run: Mapped["Run"] = relationship(back_populates="suites")
