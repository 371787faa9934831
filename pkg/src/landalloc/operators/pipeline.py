from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ValidationError
from .crossover import CROSSOVER_KINDS, crossover
from .init import INIT_KINDS
from .mutation import BCPM_RATE, BRM_RATE, MUTATION_KINDS, RBM_RATE, RCM_RATE, mutate_combined
from .repair import repair

REPAIR_KINDS = ("RRM", "BRM")


@dataclass(frozen=True)
class OperatorConfig:
    crossover: str = "AC"
    mutation: str = "MutC"
    repair: str = "RRM"
    init: str = "SP-I"
    p_cross: float = 0.5
    p_mut: float = 0.5
    drc_bridge_fixed_urban: bool = False
    rbm_max_block: int | None = None

    def __post_init__(self):
        for value, allowed, what in (
            (self.crossover, CROSSOVER_KINDS, "crossover"),
            (self.mutation, MUTATION_KINDS, "mutation"),
            (self.repair, REPAIR_KINDS, "repair"),
            (self.init, INIT_KINDS, "init"),
        ):
            if value not in allowed:
                raise ValidationError(f"unknown {what} {value!r}; expected one of {allowed}")
        for name in ("p_cross", "p_mut"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {p}")
        if self.rbm_max_block is not None and self.rbm_max_block < 1:
            raise ValidationError("rbm_max_block must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fixed_rates"] = {"RBM": RBM_RATE, "RCM": RCM_RATE, "BRM": BRM_RATE, "BCPM": BCPM_RATE,
                            "mask_swap": 0.5}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OperatorConfig":
        d = {k: v for k, v in d.items() if k != "fixed_rates"}
        return cls(**d)


def vary(a, b, inst, rng: np.random.Generator, cfg: OperatorConfig, n_children: int = 2):
    """Crossover (prob. p_cross), mutation (prob. p_mut), then repair of any
    child still infeasible. Returns ``n_children`` (1 or 2) feasible genotypes."""
    if rng.random() < cfg.p_cross:
        kids = crossover(a, b, inst, rng, cfg.crossover, cfg.drc_bridge_fixed_urban)
    else:
        kids = (np.array(a, dtype=bool), np.array(b, dtype=bool))
    out = []
    for child in kids[:n_children]:
        if rng.random() < cfg.p_mut:
            child = mutate_combined(child, inst, rng, cfg.mutation, cfg.rbm_max_block)
        out.append(repair(child, inst, rng, cfg.repair))
    return out
