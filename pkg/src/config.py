"""Application configuration loaded from environment variables."""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        value = int(raw.strip())
    except ValueError as e:
        raise ValueError(f"Invalid {name} value {raw!r}: {e}") from e
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def _bool_env(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    lowered = raw.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"Invalid {name} value {raw!r}: expected true or false")


@dataclass
class Config:
    """Application configuration."""

    # Application
    environment: str
    log_level: str

    # Normalizer
    normalize_step_budget: int
    check_every_step: bool

    # Oracle
    oracle_max_depth: int
    oracle_max_terms: int

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        environment = os.getenv("ENVIRONMENT", "development")
        log_level = os.getenv("LOG_LEVEL", "WARNING").upper()

        return cls(
            environment=environment,
            log_level=log_level,
            normalize_step_budget=_int_env("NORMALIZE_STEP_BUDGET", 1_000_000),
            check_every_step=_bool_env("CHECK_EVERY_STEP", False),
            oracle_max_depth=_int_env("ORACLE_MAX_DEPTH", 7),
            oracle_max_terms=_int_env("ORACLE_MAX_TERMS", 8),
        )


# Global config instance
config = Config.from_env()
