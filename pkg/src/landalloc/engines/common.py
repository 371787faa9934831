from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import ValidationError
from ..genotype import to_bitstring
from ..instance import Instance
from ..objectives import TEL_MODES, ObjectivePoint
from ..operators import OperatorConfig
from ..records import RunRecord

ENGINES = ("NSGA-II", "MOEA/D")


class Solution(NamedTuple):
    genotype: np.ndarray
    objectives: ObjectivePoint
    feasible: bool = True


@dataclass(frozen=True)
class EngineConfig:
    engine: str = "NSGA-II"
    pop_size: int = 100
    ffe_budget: int = 100_000
    operators: OperatorConfig = field(default_factory=OperatorConfig)
    moead_neighborhood: int | None = None
    seed: int = 0
    tel_mode: str = "boundary"

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValidationError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")
        if self.pop_size < 2:
            raise ValidationError("pop_size must be >= 2")
        if self.ffe_budget < self.pop_size:
            raise ValidationError(
                f"ffe_budget={self.ffe_budget} cannot cover the initial population of {self.pop_size}"
            )
        if self.neighborhood > self.pop_size or self.neighborhood < 2:
            raise ValidationError("moead_neighborhood must lie in [2, pop_size]")
        if self.tel_mode not in TEL_MODES:
            raise ValidationError(f"unknown tel_mode {self.tel_mode!r}")

    @property
    def p_cross(self) -> float:
        return self.operators.p_cross

    @property
    def p_mut(self) -> float:
        return self.operators.p_mut

    @property
    def neighborhood(self) -> int:
        if self.moead_neighborhood is not None:
            return self.moead_neighborhood
        return min(self.pop_size, max(2, math.ceil(0.1 * self.pop_size)))

    def to_dict(self) -> dict:
        return {
            "engine": self.engine,
            "pop_size": self.pop_size,
            "ffe_budget": self.ffe_budget,
            "operators": self.operators.to_dict(),
            "moead_neighborhood": self.moead_neighborhood,
            "effective_neighborhood": self.neighborhood,
            "seed": self.seed,
            "tel_mode": self.tel_mode,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        d = dict(d)
        d.pop("effective_neighborhood", None)
        ops = d.pop("operators", {})
        return cls(operators=OperatorConfig.from_dict(ops), **d)


def dominates(p, q) -> bool:
    """Pareto dominance for minimisation."""
    return p[0] <= q[0] and p[1] <= q[1] and (p[0] < q[0] or p[1] < q[1])


def _points(pop) -> np.ndarray:
    if isinstance(pop, np.ndarray):
        return pop.reshape(len(pop), -1).astype(np.float64)
    return np.array([s.objectives if isinstance(s, Solution) else s for s in pop], dtype=np.float64)


def dominance_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when point i dominates point j."""
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    return le & lt


def nondominated_sort(pop) -> list[list[int]]:
    """Fronts as lists of input indices, in input order within each front."""
    F = _points(pop)
    if len(F) == 0:
        return []
    dom = dominance_matrix(F)
    remaining = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(remaining == 0)
    assigned = np.zeros(len(F), dtype=bool)
    while len(current):
        fronts.append(current.tolist())
        assigned[current] = True
        remaining = remaining - dom[current].sum(axis=0)
        current = np.flatnonzero((remaining == 0) & ~assigned)
    return fronts


def crowding_distance(front) -> np.ndarray:
    F = _points(front)
    n = len(F)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(F.shape[1]):
        order = np.argsort(F[:, k], kind="stable")
        col = F[order, k]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


class Archive:
    """Non-dominated set of evaluated points; equal points are kept once."""

    def __init__(self):
        self.F = np.empty((0, 2))
        self.G: list[np.ndarray] = []

    def add(self, f, g) -> bool:
        f = np.asarray(f, dtype=np.float64)
        F = self.F
        if len(F) and np.any(np.all(F <= f, axis=1)):
            return False
        keep = ~np.all(f <= F, axis=1) if len(F) else np.zeros(0, dtype=bool)
        self.F = np.vstack([F[keep], f])
        self.G = [x for x, k in zip(self.G, keep) if k] + [np.array(g, dtype=bool)]
        return True

    def __len__(self):
        return len(self.F)


def front_entries(F: np.ndarray, G) -> list[dict]:
    """Record entries sorted by (lap, tel), one per distinct objective point."""
    seen = set()
    out = []
    for i in np.lexsort((F[:, 1], F[:, 0])):
        key = (float(F[i, 0]), float(F[i, 1]))
        if key in seen:
            continue
        seen.add(key)
        out.append({"lap": key[0], "tel": key[1], "genotype": to_bitstring(G[i])})
    return out


def make_record(cfg: EngineConfig, inst: Instance, ffe_used: int, front: list[dict], trace) -> RunRecord:
    return RunRecord(
        config=cfg.to_dict(),
        seed=cfg.seed,
        instance_name=inst.name,
        instance_digest=inst.digest,
        tel_mode=cfg.tel_mode,
        ffe_budget=cfg.ffe_budget,
        ffe_used=ffe_used,
        front=front,
        trace=list(trace),
    )
