"""
Runtime Configuration

This module loads settings from the environment (and an optional .env file)
and configures logging for the whole `app` package.

Environment Variables (all optional):
- TORIC_THREADS: worker threads for sibling-chart recursion (default: 1)
- TORIC_MAX_STEPS: default step budget of generic resolutions (default: 64)
- TORIC_NORMALIZE: saturate non-normal charts before recursing, 1/0 (default: 1)
- TORIC_LOG_LEVEL: log level name (default: WARNING)
"""

import logging
import os

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

from app.errors import ConfigError

# Load environment variables from .env file
load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _bool_setting(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    lowered = raw.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(f"{name} must be a boolean flag, got {raw!r}")


THREADS = _int_setting("TORIC_THREADS", 1)
MAX_STEPS = _int_setting("TORIC_MAX_STEPS", 64)
NORMALIZE = _bool_setting("TORIC_NORMALIZE", True)
LOG_LEVEL = os.getenv("TORIC_LOG_LEVEL", "WARNING").upper()


# ============================================================================
# LOGGING
# ============================================================================

def setup_logging(level: str | None = None) -> None:
    """
    Route all `app.*` loggers through a single rich handler on stderr.

    stdout is reserved for machine-readable output, so the console is bound
    to stderr. Safe to call more than once (the root handler is replaced).
    """
    logging.basicConfig(
        level=(level or LOG_LEVEL),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
