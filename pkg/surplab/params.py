"""Validated bundle of the extraction and stability knobs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .config import settings


@dataclass(frozen=True)
class PipelineParams:
    eps: float = field(default_factory=lambda: settings.EPS)
    alpha: float = field(default_factory=lambda: settings.ALPHA)
    delta: float = field(default_factory=lambda: settings.DELTA)
    C: float | None = None  # None: 4*log2(n) of whatever graph the step sees
    exact_limit: int = field(default_factory=lambda: settings.EXACT_LIMIT)
    clique_exact_limit: int = field(default_factory=lambda: settings.CLIQUE_EXACT_LIMIT)
    clique_target: int = field(default_factory=lambda: settings.CLIQUE_TARGET)
    dense_finder: str = field(default_factory=lambda: settings.DENSE_FINDER)
    theta_lo: float = field(default_factory=lambda: settings.THETA_LO)
    theta_hi: float = field(default_factory=lambda: settings.THETA_HI)
    max_uncovered_fraction: float = field(default_factory=lambda: settings.MAX_UNCOVERED_FRACTION)
    absorb_residual: bool = field(default_factory=lambda: settings.ABSORB_RESIDUAL)
    eps0: float | None = None
    alpha0: float | None = None
    strict: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.eps < 0.25:
            raise ValueError(f"eps must lie in (0, 1/4), got {self.eps}")
        alpha_cap = min(1 / 12 - self.eps / 6, 1 / 6 - 2 * self.eps / 3)
        if not 0 < self.alpha < alpha_cap:
            raise ValueError(f"alpha must lie in (0, {alpha_cap:.4g}), got {self.alpha}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.C is not None and self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.exact_limit < 1:
            raise ValueError(f"exact_limit must be >= 1, got {self.exact_limit}")
        if self.clique_exact_limit < 1:
            raise ValueError(f"clique_exact_limit must be >= 1, got {self.clique_exact_limit}")
        if self.clique_target < 2:
            raise ValueError(f"clique_target must be >= 2, got {self.clique_target}")
        if not 0 <= self.theta_lo < self.theta_hi <= 1:
            raise ValueError(f"theta_lo/theta_hi need 0 <= lo < hi <= 1, got {self.theta_lo}/{self.theta_hi}")
        if not 0 <= self.max_uncovered_fraction <= 1:
            raise ValueError(f"max_uncovered_fraction must lie in [0, 1], got {self.max_uncovered_fraction}")
        if self.eps0 is not None and self.eps0 <= self.eps:
            raise ValueError(f"eps0 must exceed eps, got {self.eps0}")
        if self.alpha0 is not None and self.alpha0 <= self.alpha:
            raise ValueError(f"alpha0 must exceed alpha, got {self.alpha0}")

    @property
    def eps_aux(self) -> float:
        return self.eps0 if self.eps0 is not None else 1.1 * self.eps

    @property
    def alpha_aux(self) -> float:
        return self.alpha0 if self.alpha0 is not None else 1.1 * self.alpha

    def balance_for(self, n: int) -> float:
        """C, defaulting to 4*log2(n) (smallest value with the size guarantee of the peeling loop)."""
        if self.C is not None:
            return self.C
        return 4 * math.log2(max(n, 2))

    def with_overrides(self, **changes: object) -> PipelineParams:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})
