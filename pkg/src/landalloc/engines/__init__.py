"""Optimization engines sharing the operator kit and FFE accounting."""

from ..records import RunRecord
from .common import (
    ENGINES,
    Archive,
    EngineConfig,
    Solution,
    crowding_distance,
    dominance_matrix,
    dominates,
    nondominated_sort,
)
from .moead import run_moead, tchebycheff, weight_vectors
from .nsga2 import run_nsga2


def run(inst, cfg: EngineConfig, on_generation=None) -> RunRecord:
    if cfg.engine == "NSGA-II":
        return run_nsga2(inst, cfg, on_generation)
    return run_moead(inst, cfg, on_generation)


__all__ = [
    "ENGINES",
    "Archive",
    "EngineConfig",
    "RunRecord",
    "Solution",
    "crowding_distance",
    "dominance_matrix",
    "dominates",
    "nondominated_sort",
    "run",
    "run_moead",
    "run_nsga2",
    "tchebycheff",
    "weight_vectors",
]
