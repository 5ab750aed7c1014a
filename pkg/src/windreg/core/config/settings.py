"""Application settings loaded from environment variables."""

from __future__ import annotations

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """windreg run configuration.

    Every field can be overridden with a ``WINDREG_``-prefixed environment
    variable (``WINDREG_SEED=7``) or a ``.env`` file. CLI flags take precedence.
    """

    model_config = SettingsConfigDict(
        env_prefix="WINDREG_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Reproducibility
    seed: int = 42

    # Evaluation protocol
    test_fraction: float = 0.2
    folds: int = 10
    # Fold-level worker threads; results never depend on this value.
    n_jobs: int = 1

    # kNN neighbour-count search
    knn_max_k: int = 25
    knn_inner_folds: int = 5

    # Permutation importance
    permutation_repeats: int = 5

    # Reports
    overlay_window: int = 144

    # Logging
    log_level: str = "warning"

    @field_validator("n_jobs")
    @classmethod
    def _n_jobs_nonzero(cls, value: int) -> int:
        if value == 0:
            raise ValueError("n_jobs must not be 0")
        return value


def get_settings() -> Settings:
    """Create and return a Settings instance."""
    return Settings()
