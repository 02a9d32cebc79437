"""Common configuration settings for every command and service."""

import os
from typing import Literal

from pydantic import Field, computed_field
from pydantic_settings import BaseSettings, SettingsConfigDict


class CommonSettings(BaseSettings):
    """Environment-driven settings shared by the CLI and the services."""

    model_config = SettingsConfigDict(
        env_prefix="E2E_NER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Project Settings
    PROJECT_NAME: str = Field(default="e2e-ner", description="Project name")

    # Logging Settings
    LOG_LEVEL: str = Field(default="INFO", description="Log level for stderr output")
    LOG_FILE: str | None = Field(
        default=None, description="Optional log file path (added next to stderr)"
    )
    LOG_FORMAT: Literal["console", "json"] = Field(
        default="console", description="Structured log rendering (console, json)"
    )

    # Execution Settings
    THREADS: int | None = Field(
        default=None, ge=1, description="Worker thread cap (default: available cores)"
    )
    DEFAULT_SEED: int = Field(default=0, description="Seed used when none is given")
    OUTPUT_DIR: str = Field(default="runs", description="Default output directory")

    @computed_field
    def effective_threads(self) -> int:
        return self.THREADS or os.cpu_count() or 1


# Global settings instance
settings = CommonSettings()


def get_settings() -> CommonSettings:
    """Get the global settings instance."""
    return settings
