"""JSON result envelopes and the optional append-only result cache."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__

__all__ = ["CACHE_ENV", "ResultCache", "ResultEnvelope", "counts_payload", "counts_from_payload"]

CACHE_ENV = "WALKAREA_CACHE"


def counts_payload(counts: dict[int, int]) -> dict[str, str]:
    """Integer-keyed counts as decimal strings, safe for any magnitude."""
    return {str(a): str(c) for a, c in sorted(counts.items())}


def counts_from_payload(payload: dict[str, str]) -> dict[int, int]:
    return {int(a): int(c) for a, c in payload.items()}


@dataclass
class ResultEnvelope:
    command: str
    parameters: dict[str, Any]
    payload: Any
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    version: str = __version__

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(asdict(self), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultEnvelope":
        return cls(**json.loads(text))

    def cache_key(self) -> str:
        return _key(self.command, self.parameters, self.version)


def _key(command: str, parameters: dict, version: str) -> str:
    return json.dumps([command, parameters, version], sort_keys=True)


class ResultCache:
    """JSON-lines file of envelopes keyed by ``(command, parameters, version)``.

    Later lines win.  The cache only short-circuits recomputation; nothing
    that verifies results reads from it.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)

    @classmethod
    def from_env(cls) -> "ResultCache | None":
        path = os.environ.get(CACHE_ENV)
        return cls(path) if path else None

    def get(self, command: str, parameters: dict) -> ResultEnvelope | None:
        if not self.path.exists():
            return None
        wanted = _key(command, parameters, __version__)
        found = None
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    env = ResultEnvelope.from_json(line)
                except (json.JSONDecodeError, TypeError):
                    continue  # tolerate a torn trailing write
                if env.cache_key() == wanted:
                    found = env
        return found

    def put(self, envelope: ResultEnvelope) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(envelope.to_json() + "\n")
