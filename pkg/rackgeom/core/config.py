"""
Configuration settings for rackgeom.
Uses Pydantic settings for environment variable management.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Resource caps and defaults loaded from environment variables.

    Attributes:
        GROUP_CAP: Largest permutation group that may be enumerated
        ISO_SEARCH_MAX: Largest rack size for backtracking isomorphism search
        MAX_COCHAIN_TUPLES: Largest n^(k+1) for which a differential is assembled
        SPARSE_DENSITY: Nonzero density below which the sparse elimination engine is used
        FQ_RADIUS: Default ball radius in free quandles
        FQ_DISTANCE_RADIUS: Default total depth of the bidirectional distance search
        FQ_CONJ_LEN: Default conjugator-length cap for free-quandle movers
        FQ_BALL_CAP: Largest number of free-quandle elements held by one search
        FQ_MAX_RADIUS: Hard limit on the free-quandle radius
        FQ_MAX_CONJ_LEN: Hard limit on the free-quandle conjugator length
        LOG_LEVEL: Logging level name
        LOG_JSON: Emit logs as JSON lines
    """

    GROUP_CAP: int = 1_000_000
    ISO_SEARCH_MAX: int = 12
    MAX_COCHAIN_TUPLES: int = 1296
    SPARSE_DENSITY: float = 0.10

    # Free quandle search
    FQ_RADIUS: int = 4
    FQ_DISTANCE_RADIUS: int = 6
    FQ_CONJ_LEN: int = 1
    FQ_BALL_CAP: int = 200_000
    FQ_MAX_RADIUS: int = 6
    FQ_MAX_CONJ_LEN: int = 8

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = False

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="RACKGEOM_",
        case_sensitive=True,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
