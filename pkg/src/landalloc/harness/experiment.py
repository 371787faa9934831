"""Batch execution of (instance, configuration, seed) cells with a manifest."""

from __future__ import annotations

import hashlib
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..engines import EngineConfig, run
from ..errors import LandallocError, ValidationError
from ..instance import load_instance
from .tuning import derive_seeds

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"


@dataclass
class ExperimentPlan:
    """``configs`` maps an optimizer label to an :class:`EngineConfig` dict
    (its ``seed`` and ``ffe_budget`` are overridden per cell)."""

    instances: list[Path]
    configs: dict[str, dict]
    seeds: list[int]
    budget: int = 100_000
    out: Path = field(default_factory=lambda: Path("runs"))

    def __post_init__(self):
        if not self.instances:
            raise ValidationError("plan needs at least one instance")
        if not self.seeds:
            raise ValidationError("plan needs at least one seed")
        if not self.configs:
            raise ValidationError("plan needs at least one configuration")
        for label in self.configs:
            if not re.fullmatch(r"[A-Za-z0-9_.+-]+", label):
                raise ValidationError(f"configuration label {label!r} is not file-name safe")
        self.instances = [Path(p) for p in self.instances]
        self.out = Path(self.out)

    @classmethod
    def from_file(cls, path, out=None) -> "ExperimentPlan":
        path = Path(path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        base = path.parent
        try:
            if "seeds" in doc:
                seeds = [int(s) for s in doc["seeds"]]
            else:
                seeds = derive_seeds(int(doc.get("master_seed", 0)), int(doc["n_seeds"]))
            return cls(
                instances=[base / p for p in doc["instances"]],
                configs=dict(doc["configs"]),
                seeds=seeds,
                budget=int(doc.get("budget", 100_000)),
                out=Path(out) if out is not None else base / doc.get("out", "runs"),
            )
        except KeyError as exc:
            raise ValidationError(f"plan file {path} lacks field {exc}") from None

    def cells(self) -> list[tuple[Path, str, int]]:
        return [(i, c, s) for i in self.instances for c in self.configs for s in self.seeds]


def record_name(instance: str, label: str, seed: int) -> str:
    return f"{instance}__{label}__s{seed}.json"


def run_cell(instance_path: Path, label: str, config: dict, seed: int, budget: int, out: Path) -> dict:
    entry = {"instance": instance_path.stem, "optimizer": label, "seed": seed}
    try:
        inst = load_instance(instance_path)
        cfg = EngineConfig.from_dict({**config, "seed": seed, "ffe_budget": budget})
        record = run(inst, cfg)
        path = out / "records" / record_name(inst.name, label, seed)
        record.save(path)
    except (OSError, LandallocError, TypeError, ValueError) as exc:
        log.warning("cell %s/%s/%d failed: %s", instance_path.stem, label, seed, exc)
        return {**entry, "status": "failed", "error": f"{type(exc).__name__}: {exc}"}
    return {
        **entry,
        "status": "ok",
        "path": str(path.relative_to(out)),
        "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
        "ffe_used": record.ffe_used,
    }


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> dict:
    """Run every cell of the plan and write ``manifest.json`` into ``plan.out``.

    A failing cell is recorded in the manifest and does not stop the others.
    """
    (plan.out / "records").mkdir(parents=True, exist_ok=True)
    jobs = [
        (inst, label, plan.configs[label], seed, plan.budget, plan.out)
        for inst, label, seed in plan.cells()
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(run_cell, *zip(*jobs)))
    else:
        entries = [run_cell(*job) for job in jobs]
    manifest = {
        "budget": plan.budget,
        "configs": plan.configs,
        "seeds": plan.seeds,
        "instances": [p.stem for p in plan.instances],
        "cells": entries,
    }
    (plan.out / MANIFEST).write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n")
    return manifest
