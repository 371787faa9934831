"""Repairs that restore u(x) = T."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import ContractError
from ..genotype import decode_flat
from ..instance import AGRICULTURAL, URBAN, Instance
from ._select import weighted_index

log = logging.getLogger(__name__)


def repair_rrm(g, inst: Instance, rng: np.random.Generator) -> np.ndarray:
    """Random repair: switch off uniformly chosen ones until u(x) = T."""
    g = np.array(g, dtype=bool)
    ones = np.flatnonzero(g)
    excess = len(ones) - inst.budget
    if excess < 0:
        raise ContractError(
            f"RRM only removes conversions; got u={len(ones)} < T={inst.budget}"
        )
    if excess:
        g[rng.choice(ones, excess, replace=False)] = False
    return g


def repair_brm(g, inst: Instance, rng: np.random.Generator) -> np.ndarray:
    """Biased repair, one cell at a time.

    On a deficiency an unconverted agricultural cell is converted with
    probability proportional to its urban neighbours; on an excess a converted
    cell is reverted with probability proportional to its agricultural
    neighbours. Neighbour counts are taken on the current map, so they change
    after every step.
    """
    g = np.array(g, dtype=bool)
    u = int(np.count_nonzero(g))
    target = inst.budget
    if u == target:
        return g
    adding = u < target
    want = URBAN if adding else AGRICULTURAL
    m = decode_flat(g, inst)
    weights = np.count_nonzero(m[inst.neighbor_table[inst.agri_cells]] == want, axis=1)
    pos_nb = inst.position_neighbors
    # each step turns one cell into `want`, raising its neighbours' weights by one
    while u != target:
        cand = ~g if adding else g
        w = np.where(cand, weights, 0)
        if w.any():
            i = weighted_index(w, rng)
        else:
            free = np.flatnonzero(cand)
            i = free[rng.integers(len(free))]
        g[i] = adding
        nb = pos_nb[i]
        weights[nb[nb >= 0]] += 1
        u += 1 if adding else -1
    return g


def repair(g, inst: Instance, rng: np.random.Generator, kind: str) -> np.ndarray:
    """Post-variation repair. RRM cannot add conversions, so a deficiency under
    ``kind="RRM"`` is handled by BRM's deficiency path."""
    g = np.asarray(g, dtype=bool)
    u = int(np.count_nonzero(g))
    if u == inst.budget:
        return g
    if kind == "RRM":
        if u > inst.budget:
            return repair_rrm(g, inst, rng)
        log.debug("RRM cannot fix deficiency u=%d < T=%d; using BRM", u, inst.budget)
        return repair_brm(g, inst, rng)
    if kind == "BRM":
        return repair_brm(g, inst, rng)
    raise ContractError(f"unknown repair kind {kind!r}")
