"""Runtime settings.

Every CLI flag has a key here. Values resolve in this order, later wins:
built-in defaults, ``LABELCHECK_*`` environment variables (a ``.env`` file is
loaded first), the ``--config`` key=value file, explicit command-line flags.
"""

import os
from pathlib import Path
from typing import Any, Literal, Mapping

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.errors import UsageError

ENV_PREFIX = "LABELCHECK_"


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    log_level: Literal["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    jobs: int = Field(1, ge=1)

    # fetcher
    max_retries: int = Field(3, ge=1)
    min_interval_ms: int = Field(1000, ge=0)
    backoff_ms: int = Field(500, ge=0)
    timeout_s: float = Field(10.0, gt=0)
    user_agent: str = "labelcheck/0.1 (privacy-label research crawler)"

    # extraction / cleaning
    extractor: Literal["density", "trafilatura"] = "density"
    link_density: float = Field(0.5, ge=0, le=1)
    merge_floor: int = Field(20, ge=1)
    min_words: int = Field(100, ge=1)
    policy_threshold: float = Field(0.5, ge=0, le=1)

    # annotation
    threshold: float = Field(0.5, ge=0, le=1)

    # corpus
    download_floor: int = Field(1000, ge=0)
    suffix_list: str | None = None


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def _env_values() -> dict[str, str]:
    values = {}
    for key, value in os.environ.items():
        if key.startswith(ENV_PREFIX):
            values[_normalize_key(key[len(ENV_PREFIX):])] = value
    return values


def load_settings(config_path: str | Path | None = None, overrides: Mapping[str, Any] | None = None,
                  use_env: bool = True) -> Settings:
    """Build Settings from env, an optional key=value file and explicit overrides."""
    merged: dict[str, Any] = {}
    if use_env:
        load_dotenv()
        merged.update(_env_values())
    if config_path:
        if not os.path.exists(config_path):
            raise UsageError(f"config file not found: {config_path}")
        for key, value in dotenv_values(config_path).items():
            if value is not None:
                merged[_normalize_key(key)] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[_normalize_key(key)] = value

    unknown = sorted(set(merged) - set(Settings.model_fields))
    if unknown:
        raise UsageError(f"unknown setting(s): {', '.join(unknown)}")
    if isinstance(merged.get("log_level"), str):
        merged["log_level"] = merged["log_level"].upper()
    try:
        return Settings.model_validate(merged)
    except ValidationError as e:
        raise UsageError(f"invalid settings: {e}") from e
