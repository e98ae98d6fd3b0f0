"""
Runtime Configuration
Settings loaded from the environment (and an optional .env file)
"""
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.utils.errors import ConfigError

load_dotenv()

ENV_PREFIX = "ESPDESIGNS_"


class Settings(BaseModel):
    """Validated runtime settings."""

    jobs: int = Field(default=1, ge=1)
    output_dir: str = "reports"
    log_level: str = "INFO"
    seed: int = 20240601
    chunk_size: int = Field(default=200_000, ge=1_000)
    sample: int = Field(default=100, ge=1)
    heavy: bool = False

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value!r}")
        return value


def _read_env() -> dict:
    raw = {}
    for name in Settings.model_fields:
        value = os.getenv(ENV_PREFIX + name.upper())
        if value is not None and value != "":
            raw[name] = value
    return raw


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Build settings from ESPDESIGNS_* environment variables.

    Returns:
        Settings instance (cached for the process)

    Raises:
        ConfigError: when a variable fails validation
    """
    try:
        return Settings(**_read_env())
    except ValidationError as e:
        raise ConfigError(f"❌ Invalid configuration: {e}") from e


def override(settings: Settings, **changes) -> Settings:
    """Return a copy of settings with non-None CLI overrides applied."""
    changes = {k: v for k, v in changes.items() if v is not None}
    try:
        return Settings(**{**settings.model_dump(), **changes})
    except ValidationError as e:
        raise ConfigError(f"❌ Invalid option: {e}") from e
