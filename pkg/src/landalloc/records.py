"""Run records: the JSON persistence unit of one optimizer run."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class RunRecord:
    config: dict
    seed: int
    instance_name: str
    instance_digest: str
    tel_mode: str
    ffe_budget: int
    ffe_used: int
    front: list[dict] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    def points(self) -> np.ndarray:
        """Front objective pairs as an ``(n, 2)`` array of (lap, tel)."""
        return np.array([[p["lap"], p["tel"]] for p in self.front], dtype=np.float64).reshape(-1, 2)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def save(self, path) -> Path:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(self.to_json(), encoding="utf-8")
        tmp.replace(path)
        return path

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        return cls(**d)

    @classmethod
    def load(cls, path) -> "RunRecord":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
