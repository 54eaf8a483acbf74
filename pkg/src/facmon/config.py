"""Service configuration: one YAML file, overridden by env vars, then flags.

Recognized env vars: BIND_ADDR, DATA_DIR, SESSION_TTL_HOURS, MAX_UPLOAD_BYTES.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import yaml

from .errors import bail

DEFAULT_BIND = "127.0.0.1:8000"
DEFAULT_MAX_UPLOAD = 5 * 1024 * 1024


@dataclass(frozen=True)
class AppConfig:
    data_dir: Path
    bind_addr: str = DEFAULT_BIND
    session_ttl_hours: float = 8.0
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    # scrypt cost parameters for new password digests
    scrypt_n: int = 2**14
    scrypt_r: int = 8
    scrypt_p: int = 1

    @property
    def host(self) -> str:
        return self.bind_addr.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind_addr.rsplit(":", 1)[1])


def _validate(config: AppConfig) -> AppConfig:
    host, sep, port = config.bind_addr.rpartition(":")
    if not sep or not host or not port.isdigit() or not 0 <= int(port) <= 65535:
        raise bail("CONFIG_ERROR", f"bind_addr {config.bind_addr!r} is not host:port")
    if config.session_ttl_hours <= 0:
        raise bail("CONFIG_ERROR", "session_ttl_hours must be positive")
    if config.max_upload_bytes <= 0:
        raise bail("CONFIG_ERROR", "max_upload_bytes must be positive")
    return config


def load_config(
    config_file: str | os.PathLike | None = None,
    env: Mapping[str, str] | None = None,
    **overrides,
) -> AppConfig:
    """Merge defaults <- config file <- env vars <- explicit overrides."""
    env = os.environ if env is None else env
    values: dict = {"data_dir": Path("data")}

    if config_file is not None:
        try:
            loaded = yaml.safe_load(Path(config_file).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise bail("CONFIG_ERROR", f"cannot read config file {config_file}: {exc}")
        if not isinstance(loaded, dict):
            raise bail("CONFIG_ERROR", f"config file {config_file} must hold a mapping")
        known = set(AppConfig.__dataclass_fields__)
        unknown = set(loaded) - known
        if unknown:
            raise bail("CONFIG_ERROR", f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)

    if env.get("BIND_ADDR"):
        values["bind_addr"] = env["BIND_ADDR"]
    if env.get("DATA_DIR"):
        values["data_dir"] = env["DATA_DIR"]
    if env.get("SESSION_TTL_HOURS"):
        values["session_ttl_hours"] = float(env["SESSION_TTL_HOURS"])
    if env.get("MAX_UPLOAD_BYTES"):
        values["max_upload_bytes"] = int(env["MAX_UPLOAD_BYTES"])

    values.update({k: v for k, v in overrides.items() if v is not None})
    values["data_dir"] = Path(values["data_dir"])
    try:
        config = AppConfig(**values)
    except TypeError as exc:
        raise bail("CONFIG_ERROR", str(exc))
    return _validate(config)
