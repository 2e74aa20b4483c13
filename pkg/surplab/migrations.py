"""Integration with Alembic migrations."""
from __future__ import annotations

import logging
from pathlib import Path

from alembic import command
from alembic.config import Config

from .config import settings

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent.absolute()


def get_alembic_config(url: str | None = None) -> Config | None:
    """Get Alembic configuration bound to an archive URL."""
    alembic_ini = PROJECT_ROOT / "alembic.ini"
    if not alembic_ini.exists():
        logger.error(f"Alembic config not found at {alembic_ini}")
        return None

    alembic_cfg = Config(str(alembic_ini))
    # абсолютный путь, чтобы команды работали из любого каталога
    alembic_cfg.set_main_option("script_location", str(PROJECT_ROOT / "alembic"))
    url = url or settings.ARCHIVE_URL
    if url:
        alembic_cfg.set_main_option("sqlalchemy.url", url.replace("%", "%%"))
    return alembic_cfg


def run_sync_migrations(url: str | None = None) -> bool:
    """Run archive migrations up to head."""
    if not (url or settings.ARCHIVE_URL):
        logger.error("No archive URL given and SURPLAB_ARCHIVE_URL is empty")
        return False
    logger.info("Starting archive migrations...")

    alembic_cfg = get_alembic_config(url)
    if not alembic_cfg:
        logger.error("Failed to get Alembic configuration")
        return False

    try:
        command.upgrade(alembic_cfg, "head")
        logger.info("Archive migrations completed successfully")
        return True
    except Exception as e:
        logger.error(f"Error running migrations: {e}", exc_info=True)
        return False
