"""Layered runtime configuration: flags > environment > config file > defaults.

The config file is a plain key=value format (one pair per line, ``#``
comments) living in the user config directory. Environment variables use
the ENVIROLLM_ prefix with the key upper-cased (ENVIROLLM_BASELINE_WATTS),
plus the short alias ENVIROLLM_DB for the database path.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from .clients import DEFAULT_OLLAMA_URL, DEFAULT_OPENAI_URL
from .energy import PowerConfig
from .quality import DEFAULT_JUDGE_MODEL

DEFAULT_BIND = "127.0.0.1:8090"


def user_data_dir() -> Path:
    if sys.platform == "win32":
        return Path(os.environ.get("APPDATA", Path.home() / "AppData" / "Roaming"))
    if sys.platform == "darwin":
        return Path.home() / "Library" / "Application Support"
    return Path(os.environ.get("XDG_DATA_HOME", Path.home() / ".local" / "share"))


def user_config_dir() -> Path:
    if sys.platform == "win32":
        return Path(os.environ.get("APPDATA", Path.home() / "AppData" / "Roaming"))
    if sys.platform == "darwin":
        return Path.home() / "Library" / "Application Support"
    return Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config"))


def default_db_path() -> str:
    return str(user_data_dir() / "envirollm" / "benchmarks.db")


def default_config_path() -> str:
    return str(user_config_dir() / "envirollm" / "config")


@dataclass
class AppConfig:
    db_path: str
    ollama_url: str = DEFAULT_OLLAMA_URL
    openai_url: str = DEFAULT_OPENAI_URL
    judge_enabled: bool = True
    judge_model: str = DEFAULT_JUDGE_MODEL
    judge_url: str = ""  # empty: benchmark commands reuse the Ollama endpoint
    baseline_watts: float = 15.0
    cpu_max_watts: float = 65.0
    gpu_max_watts: float = 220.0
    monitor_interval_s: float = 2.0
    bind: str = DEFAULT_BIND

    def power(self) -> PowerConfig:
        return PowerConfig(
            baseline_watts=self.baseline_watts,
            cpu_max_watts=self.cpu_max_watts,
            gpu_max_watts=self.gpu_max_watts,
        )


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, kind: type, raw: str):
    if kind is bool:
        lowered = raw.strip().lower()
        if lowered in _BOOL_TRUE:
            return True
        if lowered in _BOOL_FALSE:
            return False
        raise ValueError(f"config key {name}: expected a boolean, got {raw!r}")
    if kind is float:
        return float(raw)
    return raw


def parse_config_file(path: str | Path) -> dict[str, str]:
    """key=value pairs from a config file; comments and blank lines skipped."""
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = body.split("=", 1)
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        pairs[key.strip()] = value
    return pairs


def load_config(
    overrides: Mapping[str, object] | None = None,
    env: Mapping[str, str] | None = None,
    config_path: str | None = None,
) -> AppConfig:
    """Assemble the effective configuration.

    ``overrides`` holds already-typed values from CLI flags (only the flags
    the user actually passed). String layers (env, file) are coerced to each
    field's type; unknown file keys are ignored for forward compatibility.
    """
    env = env if env is not None else os.environ
    path = config_path if config_path is not None else default_config_path()

    field_types = {f.name: f.type for f in fields(AppConfig)}
    kinds = {
        name: (bool if "bool" in str(t) else float if "float" in str(t) else str)
        for name, t in field_types.items()
    }

    values: dict[str, object] = {"db_path": default_db_path()}

    if os.path.exists(path):
        for key, raw in parse_config_file(path).items():
            if key in kinds:
                values[key] = _coerce(key, kinds[key], raw)

    for name, kind in kinds.items():
        raw = env.get(f"ENVIROLLM_{name.upper()}")
        if raw is not None:
            values[name] = _coerce(name, kind, raw)
    if env.get("ENVIROLLM_DB"):
        values["db_path"] = env["ENVIROLLM_DB"]

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    return AppConfig(**values)
