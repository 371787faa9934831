"""Population initializers: SP-I, SQ-I, TEL-I, HYB-I and HAL-I."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ContractError
from ..instance import URBAN, Instance
from ._select import weighted_index

INIT_KINDS = ("SP-I", "SQ-I", "TEL-I", "HYB-I", "HAL-I")


def soil_quality(inst: Instance) -> np.ndarray:
    """Per-position soil value divided by the instance maximum."""
    top = inst.agri_soil.max()
    return inst.agri_soil / top if top > 0 else np.zeros(inst.n_vars)


def init_sp(inst: Instance, rng: np.random.Generator) -> np.ndarray:
    g = np.zeros(inst.n_vars, dtype=bool)
    g[rng.choice(inst.n_vars, inst.budget, replace=False)] = True
    return g


def _biased(inst: Instance, rng: np.random.Generator, use_soil: bool, use_tel: bool):
    """Draw-and-accept loop shared by SQ-I, TEL-I and HYB-I.

    Drawing a random unconverted cell and accepting it with probability p
    until one is accepted picks each cell with probability proportional to
    its p, which is what is sampled here directly. When every remaining p is
    zero a uniformly drawn cell is accepted so the loop cannot stall.
    """
    n = inst.n_vars
    g = np.zeros(n, dtype=bool)
    cells = inst.agri_cells
    nbr = inst.neighbor_table
    p_soil = 1.0 - soil_quality(inst) if use_soil else np.ones(n)
    urban_nbrs = None
    if use_tel:
        padded_urban = inst.padded_base == URBAN
        urban_nbrs = np.count_nonzero(padded_urban[nbr], axis=1).astype(np.float64)
        urban_nbrs = np.append(urban_nbrs, 0.0)
    for _ in range(inst.budget):
        free = np.flatnonzero(~g)
        p = p_soil[free]
        if use_tel:
            p_tel = urban_nbrs[cells[free]] / 4.0
            p = np.sqrt(p * p_tel) if use_soil else p_tel
        i = free[weighted_index(p, rng)]
        g[i] = True
        if use_tel:
            urban_nbrs[nbr[cells[i]]] += 1.0
    return g


def init_sq(inst, rng):
    return _biased(inst, rng, use_soil=True, use_tel=False)


def init_tel(inst, rng):
    return _biased(inst, rng, use_soil=False, use_tel=True)


def init_hyb(inst, rng):
    return _biased(inst, rng, use_soil=True, use_tel=True)


_SINGLE = {"SP-I": init_sp, "SQ-I": init_sq, "TEL-I": init_tel, "HYB-I": init_hyb}


def initialize(inst: Instance, rng: np.random.Generator, kind: str, pop_size: int) -> list[np.ndarray]:
    """``pop_size`` feasible genotypes. HAL-I builds the first ceil(pop/2) with
    SQ-I and the rest with TEL-I."""
    if pop_size < 2:
        raise ContractError("pop_size must be at least 2")
    if kind == "HAL-I":
        half = math.ceil(pop_size / 2)
        return [init_sq(inst, rng) for _ in range(half)] + [
            init_tel(inst, rng) for _ in range(pop_size - half)
        ]
    try:
        make = _SINGLE[kind]
    except KeyError:
        raise ContractError(f"unknown initializer {kind!r}; expected one of {INIT_KINDS}") from None
    return [make(inst, rng) for _ in range(pop_size)]
