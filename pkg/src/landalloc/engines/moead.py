"""MOEA/D with Tchebycheff decomposition and neighbourhood mating/replacement."""

from __future__ import annotations

import numpy as np

from ..instance import Instance
from ..objectives import FFECounter, evaluate
from ..operators import initialize, vary
from ..records import RunRecord
from .common import Archive, EngineConfig, front_entries, make_record


def weight_vectors(n: int) -> np.ndarray:
    t = np.arange(n) / (n - 1)
    return np.stack([t, 1.0 - t], axis=1)


def neighborhoods(weights: np.ndarray, size: int) -> np.ndarray:
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    return np.argsort(d, axis=1, kind="stable")[:, :size]


def tchebycheff(F: np.ndarray, weights: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    return np.max(weights * np.abs(F - ideal), axis=-1)


def run_moead(inst: Instance, cfg: EngineConfig, on_generation=None) -> RunRecord:
    """Run MOEA/D; the reported front is the external archive of every
    non-dominated point evaluated during the run."""
    rng = np.random.default_rng(cfg.seed)
    ops = cfg.operators
    counter = FFECounter(cfg.ffe_budget)
    N = cfg.pop_size
    lam = weight_vectors(N)
    B = neighborhoods(lam, cfg.neighborhood)

    G = initialize(inst, rng, ops.init, N)
    F = np.array([evaluate(g, inst, counter, cfg.tel_mode) for g in G])
    ideal = F.min(axis=0)
    archive = Archive()
    for g, f in zip(G, F):
        archive.add(f, g)
    trace = []

    def log_generation(gen):
        trace.append({
            "generation": gen,
            "ffe_used": counter.used,
            "best_lap": float(ideal[0]),
            "best_tel": float(ideal[1]),
            "front_size": len(archive),
        })
        if on_generation is not None:
            on_generation(gen, archive.G, archive.F)

    log_generation(0)
    gen = 0
    while counter.remaining > 0:
        gen += 1
        for i in rng.permutation(N):
            if counter.remaining == 0:
                break
            p, q = rng.choice(B[i], 2, replace=False)
            child = vary(G[p], G[q], inst, rng, ops, n_children=1)[0]
            f = np.asarray(evaluate(child, inst, counter, cfg.tel_mode))
            ideal = np.minimum(ideal, f)
            nb = B[i]
            better = tchebycheff(f, lam[nb], ideal) < tchebycheff(F[nb], lam[nb], ideal)
            for j in nb[better]:
                G[j] = child
                F[j] = f
            archive.add(f, child)
        log_generation(gen)

    front = front_entries(archive.F, archive.G)
    return make_record(cfg, inst, counter.used, front, trace)
