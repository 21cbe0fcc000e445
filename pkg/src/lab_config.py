"""
Lab Configuration Module
Loads settings from the environment (optionally a .env file) and sets up logging
"""

import os
import logging
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class LabSettings(BaseModel):
    """Runtime settings shared by the geometry, bounds and optimizer modules"""

    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(default=1e-9, gt=0)
    seed: int = 0
    log_level: str = "WARNING"
    output_dir: str = "output"
    fixture_dir: str = os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures"
    )
    oracle_max_n: int = Field(default=24, ge=1)
    enumeration_limit: int = Field(default=10_000_000, ge=1)


_ENV_FIELDS = {
    "LAB_TOLERANCE": "tolerance",
    "LAB_SEED": "seed",
    "LAB_LOG_LEVEL": "log_level",
    "LAB_OUTPUT_DIR": "output_dir",
    "LAB_FIXTURE_DIR": "fixture_dir",
    "LAB_ORACLE_MAX_N": "oracle_max_n",
    "LAB_ENUMERATION_LIMIT": "enumeration_limit",
}


@lru_cache(maxsize=1)
def get_settings() -> LabSettings:
    """
    Build settings from environment variables

    A .env file in the working directory is loaded first; variables that are
    already set in the environment win.

    Returns:
        Frozen LabSettings instance
    """
    load_dotenv()
    overrides = {
        field: os.environ[name]
        for name, field in _ENV_FIELDS.items()
        if os.environ.get(name)
    }
    return LabSettings(**overrides)


def setup_logging(level: Optional[str] = None, verbose: bool = False) -> None:
    """
    Configure the root logger once

    Args:
        level: Explicit level name; falls back to LAB_LOG_LEVEL
        verbose: Force INFO when no more detailed level is requested
    """
    name = (level or get_settings().log_level).upper()
    numeric = getattr(logging, name, logging.WARNING)
    if verbose:
        numeric = min(numeric, logging.INFO)
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)
