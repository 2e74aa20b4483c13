"""Database engine and session factory for the run archive."""
from __future__ import annotations

from cachetools import LRUCache, cached
from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker, Session

# One engine per archive URL for the life of the process
_engines: LRUCache = LRUCache(maxsize=8)


@cached(_engines)
def get_engine(url: str) -> Engine:
    return create_engine(url, echo=False, pool_pre_ping=True)


def get_session_factory(url: str) -> sessionmaker[Session]:
    return sessionmaker(get_engine(url), expire_on_commit=False, autoflush=False)


Base = declarative_base()
