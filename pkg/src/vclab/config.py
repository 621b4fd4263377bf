"""Run configuration shared by the CLI and the scripts."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, replace


@dataclass(frozen=True)
class RunConfig:
    precision: float = 1e-12  # branch point resolution
    max_step: float = 0.25  # largest continuation step in the base
    quad_tol: float = 1e-10  # adaptive quadrature relative tolerance
    rank_tol: float = 1e-8  # relative singular value cutoff
    residual_tol: float = 1e-8  # Riemann relation tolerance
    max_word_len: int = 6
    threads: int = 1
    cache_dir: str | None = None
    seed: int = 0
    constancy_pairs: int = 3
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("precision", "max_step", "quad_tol", "rank_tol", "residual_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_word_len < 0:
            raise ValueError("max_word_len must be >= 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @classmethod
    def from_env(cls, **overrides):
        threads = int(os.environ.get("VCLAB_THREADS", "1") or 1)
        return replace(cls(threads=max(1, threads)), **overrides)

    def to_json(self):
        # threads and cache location never change results, so they stay out of reports
        out = asdict(self)
        for key in ("threads", "cache_dir", "extra"):
            out.pop(key)
        return out
