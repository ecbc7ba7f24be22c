"""Run configuration: one JSON file plus command-line overrides."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import DomainError
from .sieve import DEFAULT_SEGMENT_SIZE

DEFAULT_S_GRID = [1.5, 1.2, 1.1, 1.05, 1.02, 1.01]
DEFAULT_N_GRID = [10**3, 10**4, 10**5, 10**6]

# keys that change how a run executes but never what it prints
_EXECUTION_ONLY = ("threads", "output_path")


@dataclass
class RunConfig:
    sieve_limit: int | None = None
    segment_size: int = DEFAULT_SEGMENT_SIZE
    s_grid: list[float] = field(default_factory=lambda: list(DEFAULT_S_GRID))
    N_grid: list[int] = field(default_factory=lambda: list(DEFAULT_N_GRID))
    tuples: list[str] = field(default_factory=lambda: ["0,2"])
    output_format: str = "csv"
    output_path: str | None = None
    force_s: bool = False
    force: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"output_format must be csv or json, got {self.output_format!r}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")
        self.s_grid = [float(s) for s in self.s_grid]
        self.N_grid = [int(N) for N in self.N_grid]
        self.tuples = [str(t) for t in self.tuples]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            return cls.from_json(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {path}: {exc}") from exc

    def merged(self, **overrides) -> "RunConfig":
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def digest(self) -> str:
        """sha256 over everything that can affect printed results."""
        data = {k: v for k, v in self.to_dict().items() if k not in _EXECUTION_ONLY}
        blob = json.dumps(data, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()
