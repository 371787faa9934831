"""Atomic mutations and their MutC / MutC2 compositions."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import ContractError
from ..genotype import decode, decode_flat, label_urban
from ..instance import URBAN, Instance
from ._select import weighted_index
from .repair import repair_brm, repair_rrm

log = logging.getLogger(__name__)

MUTATION_KINDS = ("MutC", "MutC2")
# gate probabilities of the composed mutation
RBM_RATE = 0.10
RCM_RATE = 0.10
BRM_RATE = 1.0
BCPM_RATE = 0.10


def default_max_block(inst: Instance) -> int:
    return max(1, math.ceil(min(inst.rows, inst.cols) / 4))


def mutate_rbm(g, inst: Instance, rng: np.random.Generator, max_block: int | None = None):
    """Convert every agricultural cell inside a random rectangle."""
    g = np.array(g, dtype=bool)
    cap = max_block or default_max_block(inst)
    h = int(rng.integers(1, min(cap, inst.rows) + 1))
    w = int(rng.integers(1, min(cap, inst.cols) + 1))
    r0 = int(rng.integers(0, inst.rows - h + 1))
    c0 = int(rng.integers(0, inst.cols - w + 1))
    pos = inst.cell_position.reshape(inst.shape)[r0:r0 + h, c0:c0 + w].ravel()
    g[pos[pos >= 0]] = True
    return g


def mutate_rcm(g, inst: Instance, rng: np.random.Generator):
    """Swap one random conversion for one random non-conversion."""
    g = np.array(g, dtype=bool)
    ones = np.flatnonzero(g)
    zeros = np.flatnonzero(~g)
    if len(ones) == 0 or len(zeros) == 0:
        log.debug("RCM no-op: u=%d, n=%d", len(ones), len(g))
        return g
    g[ones[rng.integers(len(ones))]] = False
    g[zeros[rng.integers(len(zeros))]] = True
    return g


def _pick_removal_region(sizes: np.ndarray, rng) -> int:
    return weighted_index(1.0 / sizes, rng)


def _pick_target_region(sizes: np.ndarray, rng) -> int:
    return weighted_index(sizes.astype(np.float64), rng)


def mutate_bcpm(g, inst: Instance, rng: np.random.Generator):
    """Move a small urban patch next to a (likely larger) one.

    A region holding converted cells is picked with probability inversely
    proportional to its size and its conversions are reverted. The same number
    of cells is then grown onto a target region chosen proportionally to size,
    each new cell drawn with probability proportional to its urban neighbours.
    """
    g = np.array(g, dtype=bool)
    cells = inst.agri_cells
    labels, n = label_urban(decode(g, inst))
    lab = labels.ravel()
    pos_region = lab[cells]
    candidates = np.unique(pos_region[g])
    if len(candidates) == 0:
        log.debug("BCPM no-op: no converted cells")
        return g
    sizes = np.bincount(lab, minlength=n + 1)[1:]
    removed = int(candidates[_pick_removal_region(sizes[candidates - 1], rng)])
    revert = np.flatnonzero(g & (pos_region == removed))
    count = len(revert)

    others = np.array([r for r in range(1, n + 1) if r != removed], dtype=np.int64)
    if len(others):
        first = int(others[_pick_target_region(sizes[others - 1], rng)])
        rest = sorted((int(r) for r in others if r != first), key=lambda r: (-sizes[r - 1], r))
        member = lab == first
    else:
        rest = []
        member = (lab == removed) & (inst.categories.ravel() == URBAN)
        if not member.any():
            log.debug("BCPM no-op: single region without fixed urban cells")
            return g

    g[revert] = False
    m = decode_flat(g, inst)
    nbr = inst.neighbor_table
    member = np.append(member, False)
    for _ in range(count):
        while True:
            free = np.flatnonzero(~g)
            touching = member[nbr[cells[free]]].any(axis=1)
            frontier = free[touching]
            if len(frontier) or not rest:
                break
            log.debug("BCPM: target region exhausted, trying next-largest region")
            member[:-1] |= lab == rest.pop(0)
        if len(frontier) == 0:
            log.debug("BCPM: no frontier left, placing a cell uniformly")
            frontier = free
        weights = np.count_nonzero(m[nbr[cells[frontier]]] == URBAN, axis=1)
        i = frontier[weighted_index(weights, rng)]
        g[i] = True
        m[cells[i]] = URBAN
        member[cells[i]] = True
    return g


def mutate_combined(
    g,
    inst: Instance,
    rng: np.random.Generator,
    variant: str = "MutC",
    max_block: int | None = None,
):
    """RBM(10%) [-> RRM for MutC], RCM(10%), BRM(always), BCPM(10%).

    The three gate draws are taken up front from ``rng``. The output is
    always feasible because BRM runs unconditionally and BCPM keeps u(x).
    """
    if variant not in MUTATION_KINDS:
        raise ContractError(f"unknown mutation variant {variant!r}")
    gate_rbm, gate_rcm, gate_bcpm = rng.random(3)
    g = np.asarray(g, dtype=bool)
    if gate_rbm < RBM_RATE:
        g = mutate_rbm(g, inst, rng, max_block)
        if variant == "MutC" and np.count_nonzero(g) > inst.budget:
            g = repair_rrm(g, inst, rng)
    if gate_rcm < RCM_RATE:
        g = mutate_rcm(g, inst, rng)
    g = repair_brm(g, inst, rng)
    if gate_bcpm < BCPM_RATE:
        g = mutate_bcpm(g, inst, rng)
    return g
