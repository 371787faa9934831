"""Angle crossover and the three mask-based crossovers."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ContractError
from ..genotype import drc_labels, idrc_labels, src_labels
from ..instance import Instance

CROSSOVER_KINDS = ("AC", "SRC", "DRC", "IDRC")


def _pair(a, b, inst: Instance):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if len(a) != len(b) or len(a) != inst.n_vars:
        raise ContractError("parents must both match the instance genotype length")
    return a, b


def angle_side(inst: Instance, theta: float) -> np.ndarray:
    """True for genotype positions on the non-negative side of the line through
    the grid centre at angle ``theta`` (theta=0 is a horizontal line)."""
    r, c = np.divmod(inst.agri_cells, inst.cols)
    dr = r - (inst.rows - 1) / 2
    dc = c - (inst.cols - 1) / 2
    side = dr * math.cos(theta) - dc * math.sin(theta)
    # exact zeros on the line would otherwise depend on rounding of cos/sin
    return np.round(side, 12) >= 0


def crossover_ac(a, b, inst: Instance, rng: np.random.Generator):
    a, b = _pair(a, b, inst)
    side = angle_side(inst, rng.uniform(0.0, math.pi))
    return np.where(side, a, b), np.where(side, b, a)


def _exchange(a, b, positions, labels, swapped):
    c1 = a.copy()
    c2 = b.copy()
    sel = positions[swapped[labels]]
    c1[sel] = b[sel]
    c2[sel] = a[sel]
    return c1, c2


def crossover_masked(a, b, inst: Instance, rng: np.random.Generator, kind: str = "DRC",
                     bridge_fixed_urban: bool = False):
    """Exchange whole masks between the parents.

    DRC/IDRC visit the masks in random order and give each to the first child
    from either parent with probability 1/2. SRC takes floor(k/2) randomly
    chosen masks from the first parent and the rest from the second. The
    second child always takes the other parent's bits.
    """
    a, b = _pair(a, b, inst)
    if kind == "SRC":
        positions, labels, k = src_labels(a, b, inst)
    elif kind == "DRC":
        positions, labels, k = drc_labels(a, b, inst, bridge_fixed_urban)
    elif kind == "IDRC":
        positions, labels, k = idrc_labels(a, b, inst, bridge_fixed_urban)
    else:
        raise ContractError(f"unknown masked crossover {kind!r}")
    if k == 0:
        return a.copy(), b.copy()
    order = rng.permutation(k)
    swapped = np.zeros(k, dtype=bool)
    if kind == "SRC":
        swapped[order[k // 2:]] = True
    else:
        swapped[order] = rng.random(k) < 0.5
    return _exchange(a, b, positions, labels, swapped)


def crossover(a, b, inst: Instance, rng: np.random.Generator, kind: str,
              bridge_fixed_urban: bool = False):
    if kind == "AC":
        return crossover_ac(a, b, inst, rng)
    return crossover_masked(a, b, inst, rng, kind, bridge_fixed_urban)
