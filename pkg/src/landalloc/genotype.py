"""Binary encoding over agricultural cells, map decoding and the region
analysis behind the mask-based crossovers.

A genotype is a 1-D boolean numpy array; position ``i`` refers to the ``i``-th
agricultural cell in row-major order and ``True`` means "convert to urban".
A mask set is a list of sorted integer arrays of genotype positions.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ContractError
from .instance import URBAN, CellIndex, Instance

MaskSet = list  # list[np.ndarray], each a sorted array of genotype positions

_FOUR = ndimage.generate_binary_structure(2, 1)


def as_genotype(bits) -> np.ndarray:
    """Coerce a 0/1 sequence or a ``"0101"`` string to a boolean genotype."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ContractError("genotype strings may only contain '0' and '1'")
        return np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
    g = np.asarray(bits)
    if g.dtype != bool:
        if g.size and not np.isin(g, (0, 1)).all():
            raise ContractError("genotype entries must be 0 or 1")
        g = g.astype(bool)
    return g.ravel()


def to_bitstring(g: np.ndarray) -> str:
    return (np.asarray(g, dtype=np.uint8) + ord("0")).tobytes().decode("ascii")


def unitation(g) -> int:
    return int(np.count_nonzero(g))


def is_feasible(g, inst: Instance) -> bool:
    return len(g) == inst.n_vars and unitation(g) == inst.budget


def _check_len(g, inst: Instance) -> None:
    if len(g) != inst.n_vars:
        raise ContractError(f"genotype length {len(g)} does not match instance n={inst.n_vars}")


def decode_flat(g, inst: Instance) -> np.ndarray:
    """Decoded map as a flat array with the trailing OUTSIDE sentinel (see
    :attr:`Instance.neighbor_table`)."""
    _check_len(g, inst)
    m = inst.padded_base.copy()
    m[inst.agri_cells[np.asarray(g, dtype=bool)]] = URBAN
    return m


def decode(g, inst: Instance) -> np.ndarray:
    """Apply a genotype to the initial map; returns a fresh ``R x C`` array."""
    return decode_flat(g, inst)[:-1].reshape(inst.shape)


def encode(m: np.ndarray, inst: Instance) -> np.ndarray:
    """Inverse of :func:`decode`: read conversions back off a decoded map."""
    return np.asarray(m).ravel()[inst.agri_cells] == URBAN


def label_urban(m: np.ndarray) -> tuple[np.ndarray, int]:
    return ndimage.label(np.asarray(m) == URBAN, structure=_FOUR)


def urban_regions(m: np.ndarray) -> list[frozenset]:
    """4-connected components of all urban cells (fixed and converted)."""
    labels, n = label_urban(m)
    if n == 0:
        return []
    rr, cc = np.nonzero(labels)
    lab = labels[rr, cc]
    order = np.argsort(lab, kind="stable")
    bounds = np.searchsorted(lab[order], np.arange(1, n + 2))
    return [
        frozenset(CellIndex(int(rr[i]), int(cc[i])) for i in order[bounds[k]:bounds[k + 1]])
        for k in range(n)
    ]


def _compact(positions: np.ndarray, keys: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Relabel mask keys to 0..k-1 ordered by each mask's smallest position."""
    if len(positions) == 0:
        return positions, keys[:0], 0
    uniq, inv = np.unique(keys, axis=0, return_inverse=True) if keys.ndim == 2 else np.unique(
        keys, return_inverse=True
    )
    inv = inv.ravel()
    k = len(uniq)
    first = np.full(k, np.iinfo(np.int64).max)
    np.minimum.at(first, inv, positions)
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(k)
    return positions, rank[inv], k


def masks_from_labels(positions: np.ndarray, labels: np.ndarray, k: int) -> MaskSet:
    order = np.lexsort((positions, labels))
    bounds = np.searchsorted(labels[order], np.arange(k + 1))
    return [positions[order[bounds[i]:bounds[i + 1]]] for i in range(k)]


def src_labels(a, b, inst: Instance):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    _check_len(a, inst)
    _check_len(b, inst)
    cells = inst.agri_cells
    la, na = label_urban(decode(a, inst))
    lb, nb = label_urban(decode(b, inst))
    ra = la.ravel()[cells]
    rb = lb.ravel()[cells]
    both = a & b
    n_nodes = na + nb
    if n_nodes == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, 0
    # bipartite graph between a's and b's regions, joined by shared conversions
    u = ra[both] - 1
    v = na + rb[both] - 1
    graph = coo_matrix((np.ones(len(u)), (u, v)), shape=(n_nodes, n_nodes))
    _, comp = connected_components(graph, directed=False)
    positions = np.flatnonzero(a | b)
    node = np.where(a[positions], ra[positions] - 1, na + rb[positions] - 1)
    return _compact(positions, comp[node])


def _diff_grid_labels(cells_on: np.ndarray, inst: Instance, bridge: bool) -> np.ndarray:
    grid = np.zeros(inst.rows * inst.cols, dtype=bool)
    grid[cells_on] = True
    if bridge:
        grid |= inst.categories.ravel() == URBAN
    labels, _ = ndimage.label(grid.reshape(inst.shape), structure=_FOUR)
    return labels.ravel()


def drc_labels(a, b, inst: Instance, bridge_fixed_urban: bool = False):
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    _check_len(a, inst)
    _check_len(b, inst)
    positions = np.flatnonzero(a != b)
    cells = inst.agri_cells[positions]
    labels = _diff_grid_labels(cells, inst, bridge_fixed_urban)
    return _compact(positions, labels[cells])


def idrc_labels(a, b, inst: Instance, bridge_fixed_urban: bool = False):
    a = np.asarray(a, dtype=bool)
    positions, drc, k = drc_labels(a, b, inst, bridge_fixed_urban)
    if k == 0:
        return positions, drc, 0
    direction = a[positions]
    cells = inst.agri_cells[positions]
    sub = np.zeros(len(positions), dtype=np.int64)
    for flag in (True, False):
        sel = direction == flag
        if sel.any():
            sub[sel] = _diff_grid_labels(cells[sel], inst, bridge_fixed_urban)[cells[sel]]
    keys = np.stack([drc, direction.astype(np.int64), sub], axis=1)
    return _compact(positions, keys)


def cluster_src(a, b, inst: Instance) -> MaskSet:
    """Masks of converted positions grouped by the urban regions of either parent.

    Regions of the two parents that share a converted position are merged, so
    the masks are disjoint. Fixed urban cells connect regions but carry no
    positions themselves.
    """
    return masks_from_labels(*src_labels(a, b, inst))


def cluster_drc(a, b, inst: Instance, bridge_fixed_urban: bool = False) -> MaskSet:
    """4-connected components of the positions where the parents differ."""
    return masks_from_labels(*drc_labels(a, b, inst, bridge_fixed_urban))


def cluster_idrc(a, b, inst: Instance, bridge_fixed_urban: bool = False) -> MaskSet:
    """DRC masks split by difference direction (a=1,b=0 vs a=0,b=1), then
    re-split into connected pieces."""
    return masks_from_labels(*idrc_labels(a, b, inst, bridge_fixed_urban))
