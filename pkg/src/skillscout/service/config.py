"""Service configuration: file paths, listen address, session limits."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from skillscout.dialog.types import TURN_DEPTH_CAP

CONFIG_FORMAT_VERSION = 1
CONFIG_ENV_VAR = "SKILLSCOUT_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass
class ServiceConfig:
    catalog_path: str
    prompts_path: str | None = None  # None -> packaged defaults
    rules_path: str | None = None
    utterances_path: str | None = None
    checkpoint_path: str | None = None
    sim_checkpoint_path: str | None = None
    log_path: str = "dialogs.jsonl"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8234
    turn_cap: int = TURN_DEPTH_CAP
    seed: int = 0

    def validate_files(self) -> None:
        required = {"catalog_path": self.catalog_path}
        optional = {
            "prompts_path": self.prompts_path,
            "rules_path": self.rules_path,
            "utterances_path": self.utterances_path,
            "checkpoint_path": self.checkpoint_path,
            "sim_checkpoint_path": self.sim_checkpoint_path,
        }
        for name, value in {**required, **{k: v for k, v in optional.items() if v}}.items():
            if not Path(value).exists():
                raise ConfigError(f"{name} does not exist: {value}")


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read a config file; falls back to the SKILLSCOUT_CONFIG env var."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        raise ConfigError(f"no config path given and {CONFIG_ENV_VAR} is unset")
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != CONFIG_FORMAT_VERSION:
        raise ConfigError(f"unsupported config format_version {doc.get('format_version')!r}")
    known = {f for f in ServiceConfig.__dataclass_fields__}
    unknown = set(doc) - known - {"format_version"}
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    kwargs = {k: v for k, v in doc.items() if k in known}
    return ServiceConfig(**kwargs)
