"""Generational NSGA-II with elitist (mu + lambda) survival."""

from __future__ import annotations

import numpy as np

from ..instance import Instance
from ..objectives import FFECounter, evaluate
from ..operators import initialize, vary
from ..records import RunRecord
from .common import EngineConfig, crowding_distance, front_entries, make_record, nondominated_sort


def _rank_and_crowd(F: np.ndarray) -> tuple[list[list[int]], np.ndarray, np.ndarray]:
    fronts = nondominated_sort(F)
    rank = np.empty(len(F), dtype=np.int64)
    crowd = np.empty(len(F))
    for r, front in enumerate(fronts):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return fronts, rank, crowd


def _tournament(rank, crowd, rng) -> int:
    i, j = rng.choice(len(rank), 2, replace=False)
    if rank[i] != rank[j]:
        return int(i if rank[i] < rank[j] else j)
    if crowd[i] != crowd[j]:
        return int(i if crowd[i] > crowd[j] else j)
    return int(i if rng.random() < 0.5 else j)


def _survivors(F: np.ndarray, size: int) -> np.ndarray:
    fronts, _, _ = _rank_and_crowd(F)
    chosen: list[int] = []
    for front in fronts:
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            if len(chosen) == size:
                break
            continue
        crowd = crowding_distance(F[front])
        order = np.argsort(-crowd, kind="stable")
        chosen.extend(np.asarray(front)[order[: size - len(chosen)]].tolist())
        break
    return np.asarray(chosen)


def run_nsga2(inst: Instance, cfg: EngineConfig, on_generation=None) -> RunRecord:
    """Run NSGA-II until another full generation would exceed the FFE budget.

    ``on_generation(gen, genotypes, objectives)`` is called after the initial
    population and after every generation, if given.
    """
    rng = np.random.default_rng(cfg.seed)
    ops = cfg.operators
    counter = FFECounter(cfg.ffe_budget)
    N = cfg.pop_size

    G = initialize(inst, rng, ops.init, N)
    F = np.array([evaluate(g, inst, counter, cfg.tel_mode) for g in G])
    trace = []

    def log_generation(gen):
        fronts, _, _ = _rank_and_crowd(F)
        trace.append({
            "generation": gen,
            "ffe_used": counter.used,
            "best_lap": float(F[:, 0].min()),
            "best_tel": float(F[:, 1].min()),
            "front_size": len(fronts[0]),
        })
        if on_generation is not None:
            on_generation(gen, G, F)

    log_generation(0)
    gen = 0
    _, rank, crowd = _rank_and_crowd(F)
    while counter.remaining >= N:
        gen += 1
        children: list[np.ndarray] = []
        while len(children) < N:
            a = _tournament(rank, crowd, rng)
            b = _tournament(rank, crowd, rng)
            children.extend(vary(G[a], G[b], inst, rng, ops, n_children=min(2, N - len(children))))
        Fc = np.array([evaluate(g, inst, counter, cfg.tel_mode) for g in children])
        allG = G + children
        allF = np.vstack([F, Fc])
        keep = _survivors(allF, N)
        G = [allG[i] for i in keep]
        F = allF[keep]
        _, rank, crowd = _rank_and_crowd(F)
        log_generation(gen)

    first = nondominated_sort(F)[0]
    front = front_entries(F[first], [G[i] for i in first])
    return make_record(cfg, inst, counter.used, front, trace)
