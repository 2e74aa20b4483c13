"""Configuration loader using environment variables."""
from __future__ import annotations

import os
from dataclasses import dataclass
from dotenv import load_dotenv

# Load .env file if present
load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


@dataclass
class Settings:
    # Runtime
    LOG_LEVEL: str = os.getenv("SURPLAB_LOG_LEVEL", "INFO")
    WORKERS: int = int(os.getenv("SURPLAB_WORKERS", 1))

    # Oracles
    EXACT_LIMIT: int = int(os.getenv("SURPLAB_EXACT_LIMIT", 24))              # vertices
    CLIQUE_EXACT_LIMIT: int = int(os.getenv("SURPLAB_CLIQUE_EXACT_LIMIT", 64))

    # Linear algebra
    EIGEN_SOLVER: str = os.getenv("SURPLAB_EIGEN_SOLVER", "jacobi")  # jacobi | lapack
    EIGEN_MAX_SWEEPS: int = int(os.getenv("SURPLAB_EIGEN_MAX_SWEEPS", 30))
    PSD_TOL: float = float(os.getenv("SURPLAB_PSD_TOL", 1e-8))
    CLASSIFICATION_TOL: float = float(os.getenv("SURPLAB_CLASSIFICATION_TOL", 1e-8))
    SPECTRUM_CACHE_SIZE: int = int(os.getenv("SURPLAB_SPECTRUM_CACHE_SIZE", 256))

    # Pipeline defaults (can be overridden per run from the CLI)
    EPS: float = float(os.getenv("SURPLAB_EPS", 0.01))
    ALPHA: float = float(os.getenv("SURPLAB_ALPHA", 0.05))
    DELTA: float = float(os.getenv("SURPLAB_DELTA", 0.5))
    CLIQUE_TARGET: int = int(os.getenv("SURPLAB_CLIQUE_TARGET", 10))
    THETA_LO: float = float(os.getenv("SURPLAB_THETA_LO", 0.25))
    THETA_HI: float = float(os.getenv("SURPLAB_THETA_HI", 0.75))
    DENSE_FINDER: str = os.getenv("SURPLAB_DENSE_FINDER", "peel")
    MAX_UNCOVERED_FRACTION: float = float(os.getenv("SURPLAB_MAX_UNCOVERED_FRACTION", 0.1))
    ABSORB_RESIDUAL: bool = _flag("SURPLAB_ABSORB_RESIDUAL", "1")

    # Heuristics
    LOCAL_SEARCH_RESTARTS: int = int(os.getenv("SURPLAB_LOCAL_SEARCH_RESTARTS", 8))
    LOCAL_SEARCH_MAX_PASSES: int = int(os.getenv("SURPLAB_LOCAL_SEARCH_MAX_PASSES", 100))
    LOWRANK_RANK: int = int(os.getenv("SURPLAB_LOWRANK_RANK", 8))
    LOWRANK_STEPS: int = int(os.getenv("SURPLAB_LOWRANK_STEPS", 300))
    ROUNDING_TRIALS: int = int(os.getenv("SURPLAB_ROUNDING_TRIALS", 64))
    BIASED_SAMPLES: int = int(os.getenv("SURPLAB_BIASED_SAMPLES", 64))

    # Run archive, empty disables it
    ARCHIVE_URL: str = os.getenv("SURPLAB_ARCHIVE_URL", "")


settings = Settings()
