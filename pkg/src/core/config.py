"""
Configuration management for the census tooling.
"""

from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Environment settings."""
    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Logging
    LOG_LEVEL: str = "INFO"

    # Census defaults
    CENSUS_JOBS: int = 1

    # Monitoring Configuration
    METRICS_ENABLED: bool = True
    METRICS_PATH: Optional[str] = None


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Using lru_cache to ensure we don't load .env file multiple times.
    """
    return Settings()
