"""Configuration loader: built-in defaults, a TOML file, the environment, then explicit overrides."""

from __future__ import annotations

import os
import tomllib
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

from gridcolor.search import SearchBudget

DEFAULT_CACHE_PATH = "~/.cache/gridcolor/verdicts.json"
OUTPUT_FORMATS = ("text", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    max_nodes: int = 10**9
    wall_ms: int = 600_000
    threads: int = os.cpu_count() or 1
    cache_path: str = DEFAULT_CACHE_PATH
    output_format: str = "text"
    deterministic: bool = False
    log_level: str = "WARNING"

    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_nodes, self.wall_ms, 1 if self.deterministic else self.threads)


def _coerce(key: str, value: Any) -> Any:
    if key in ("max_nodes", "wall_ms", "threads"):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ValueError(f"{key} must be a positive integer, got {value!r}")
        try:
            number = int(value)
        except ValueError as exc:
            raise ValueError(f"{key} must be a positive integer, got {value!r}") from exc
        if number < 1:
            raise ValueError(f"{key} must be a positive integer, got {value!r}")
        return number
    if key == "deterministic":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("1", "true", "yes", "0", "false", "no"):
            return value.lower() in ("1", "true", "yes")
        raise ValueError(f"deterministic must be a boolean, got {value!r}")
    if key == "output_format":
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}, got {value!r}")
        return value
    if key == "log_level":
        level = str(value).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}, got {value!r}")
        return level
    if key == "cache_path":
        if not isinstance(value, str):
            raise ValueError(f"cache_path must be a string, got {value!r}")
        return value
    raise ValueError(f"unknown setting {key!r}")


def read_config_file(path: str | Path) -> dict[str, Any]:
    """The `[gridcolor]` table of a TOML file."""
    with Path(path).expanduser().open("rb") as handle:
        data = tomllib.load(handle)
    table = data.get("gridcolor", {})
    if not isinstance(table, dict):
        raise ValueError(f"[gridcolor] in {path} must be a table")
    return table


def load_settings(
    config_file: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    **overrides: Any,
) -> Settings:
    """Merge defaults < config file < environment < overrides; `None` overrides are ignored."""
    source = os.environ if env is None else env
    merged: dict[str, Any] = {}

    config_file = config_file or source.get("GRIDCOLOR_CONFIG")
    if config_file:
        merged.update(read_config_file(config_file))
    if cache := source.get("GRIDCOLOR_CACHE"):
        merged["cache_path"] = cache
    merged.update({k: v for k, v in overrides.items() if v is not None})

    settings = Settings(**{k: _coerce(k, v) for k, v in merged.items()})
    if settings.deterministic:
        settings = replace(settings, threads=1)
    return settings
