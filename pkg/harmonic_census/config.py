import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from harmonic_census.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class CensusSettings(BaseModel):
    """
    Process-wide settings read from the environment (and an optional .env file).
    """

    model_config = ConfigDict(frozen=True)

    threads: Optional[int] = Field(default=None, ge=1)  # caps sweep parallelism
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in LOG_LEVELS:
            raise ValueError(f"Unknown log level {value}")
        return value


def get_settings() -> CensusSettings:
    """
    Build the settings from HARMONIC_CENSUS_* environment variables.
    """
    load_dotenv()
    raw_threads = os.getenv("HARMONIC_CENSUS_THREADS")
    threads: Optional[int] = None
    if raw_threads:
        try:
            threads = int(raw_threads)
        except ValueError as e:
            raise InvalidParameterError(
                f"HARMONIC_CENSUS_THREADS must be an integer, got {raw_threads!r}"
            ) from e
        if threads < 1:
            raise InvalidParameterError(
                f"HARMONIC_CENSUS_THREADS must be positive, got {threads}"
            )
    log_level = os.getenv("HARMONIC_CENSUS_LOG_LEVEL") or "WARNING"
    settings = CensusSettings(threads=threads, log_level=log_level)
    logger.debug(f"Loaded settings: {settings}")
    return settings
