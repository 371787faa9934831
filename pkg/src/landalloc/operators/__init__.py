"""Variation operators. Every operator takes a ``numpy.random.Generator`` and
is deterministic given its state."""

import numpy as np

from .crossover import CROSSOVER_KINDS, angle_side, crossover, crossover_ac, crossover_masked
from .init import INIT_KINDS, initialize, soil_quality
from .mutation import (
    MUTATION_KINDS,
    default_max_block,
    mutate_bcpm,
    mutate_combined,
    mutate_rbm,
    mutate_rcm,
)
from .pipeline import REPAIR_KINDS, OperatorConfig, vary
from .repair import repair, repair_brm, repair_rrm

RandomStream = np.random.Generator


def make_stream(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


__all__ = [
    "CROSSOVER_KINDS",
    "INIT_KINDS",
    "MUTATION_KINDS",
    "REPAIR_KINDS",
    "OperatorConfig",
    "RandomStream",
    "angle_side",
    "crossover",
    "crossover_ac",
    "crossover_masked",
    "default_max_block",
    "initialize",
    "make_stream",
    "mutate_bcpm",
    "mutate_combined",
    "mutate_rbm",
    "mutate_rcm",
    "repair",
    "repair_brm",
    "repair_rrm",
    "soil_quality",
    "vary",
]
