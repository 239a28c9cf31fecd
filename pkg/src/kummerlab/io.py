"""Run configuration and deterministic result files.

Configs are JSON objects ``{"command", "params", "seed", "workers", "out_dir"}``.
CSV cells use 12 significant digits; JSON is written with sorted keys so that
equal inputs give byte-equal files.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from . import __version__

CONFIG_KEYS = ("command", "params", "seed", "workers", "out_dir")


class ConfigError(ValueError):
    """Bad configuration; the CLI maps it to exit status 1."""


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    workers: int = 1
    out_dir: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": dict(sorted(self.params.items())),
            "seed": self.seed,
            "workers": self.workers,
            "out_dir": self.out_dir,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(data) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        if "command" not in data:
            raise ConfigError("config is missing 'command'")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'params' must be an object")
        return cls(
            command=data["command"],
            params=dict(params),
            seed=data.get("seed", 0),
            workers=data.get("workers", 1),
            out_dir=data.get("out_dir"),
        )

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from None
        return cls.from_dict(data)


def load_config(path: str | Path) -> dict:
    """Raw config mapping from a file (validated later against the command)."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")
    return data


def fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return format(v, ".12g")
    if hasattr(v, "item"):  # numpy scalar
        return fmt(v.item())
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row {row!r} does not match header {header}")
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class ResultManifest:
    config: dict
    wall_time: float
    checksums: dict[str, str]
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "version": self.version,
            "wall_time": self.wall_time,
            "checksums": dict(sorted(self.checksums.items())),
        }


def _write(path: Path, text: str) -> bytes:
    data = text.encode()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from None
    return data


def emit(
    out_dir: str | Path,
    files: dict[str, str],
    config: RunConfig,
    wall_time: float,
) -> ResultManifest:
    """Write each ``name -> text`` file, then manifest.json with their checksums."""
    out = Path(out_dir)
    sums = {name: sha256_bytes(_write(out / name, text)) for name, text in files.items()}
    manifest = ResultManifest(config.to_dict(), wall_time, sums)
    _write(out / "manifest.json", json_text(manifest.to_dict()))
    return manifest


def verify_manifest(out_dir: str | Path) -> bool:
    out = Path(out_dir)
    data = json.loads((out / "manifest.json").read_text())
    return all(sha256_bytes((out / n).read_bytes()) == h for n, h in data["checksums"].items())
