"""Step-halving hill climb over one parameter at a time."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from ..engines import EngineConfig, run
from ..instance import Instance
from ..metrics import hypervolume_2d, reference_point

log = logging.getLogger(__name__)

# (p_cross, p_mut) starting points; population starts at 100 for both
TUNING_STARTS = ((0.5, 0.5), (0.9, 0.1))


@dataclass(frozen=True)
class Guard:
    lower: float | None = None
    upper: float | None = None
    integer: bool = False

    def apply(self, value: float) -> float:
        # rounding keeps repeated +/- steps from drifting (0.5 + 0.05 != 0.55)
        value = int(round(value)) if self.integer else round(float(value), 10)
        if self.lower is not None and value < self.lower:
            value = self.lower
        if self.upper is not None and value > self.upper:
            value = self.upper
        return value

    def admits(self, value: float) -> bool:
        return self.apply(value) == value


POP_GUARD = Guard(lower=2, integer=True)
# probabilities stay in (0, 1]
PROB_GUARD = Guard(lower=0.01, upper=1.0)


@dataclass
class TuningStep:
    """State after one evaluation. ``accepted`` is False for ties too: only a
    strictly higher score replaces the incumbent."""

    iteration: int
    value: float
    score: float
    accepted: bool
    best_value: float
    best_score: float
    step: float
    direction: int


@dataclass
class TuningResult:
    name: str
    best_value: float
    best_score: float
    trace: list[TuningStep] = field(default_factory=list)

    @property
    def visited(self) -> list[float]:
        return [s.value for s in self.trace]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trace"] = [asdict(s) for s in self.trace]
        return d


def tune_parameter(
    objective: Callable[[float], float],
    start: float,
    step: float,
    iterations: int = 10,
    guard: Guard | None = None,
    name: str = "",
) -> TuningResult:
    """Maximise ``objective`` over one scalar parameter.

    Each iteration moves the best value found so far by ``step`` in the current
    direction. A better score is accepted; otherwise the direction flips, and a
    flip from subtraction back to addition halves the step first. Proposals
    are clamped by ``guard`` before evaluation.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if step <= 0:
        raise ValueError("step must be positive")
    guard = guard or Guard()
    best = guard.apply(start)
    best_score = objective(best)
    direction = 1
    result = TuningResult(name, best, best_score)
    result.trace.append(TuningStep(0, best, best_score, True, best, best_score, step, direction))
    for it in range(1, iterations + 1):
        value = guard.apply(best + direction * step)
        score = objective(value)
        accepted = score > best_score
        if accepted:
            best, best_score = value, score
        else:
            if direction < 0:
                step /= 2
            direction = -direction
        result.trace.append(
            TuningStep(it, value, score, accepted, best, best_score, step, direction)
        )
    result.best_value = best
    result.best_score = best_score
    return result


def derive_seeds(master_seed: int, count: int) -> list[int]:
    """Deterministic child seeds ``(master, i)`` for i in 0..count-1."""
    return [int(np.random.SeedSequence([master_seed, i]).generate_state(1)[0]) for i in range(count)]


class _SessionScorer:
    """Mean hypervolume over (instance, seed) runs with a reference point fixed
    by the first configuration scored in the session."""

    def __init__(self, instances: list[Instance], seeds: list[int]):
        self.instances = instances
        self.seeds = seeds
        self.refs: list[np.ndarray] | None = None
        self.cache: dict[tuple, float] = {}
        self.evaluations = 0

    def __call__(self, cfg: EngineConfig) -> float:
        key = (cfg.pop_size, round(cfg.p_cross, 10), round(cfg.p_mut, 10))
        if key in self.cache:
            return self.cache[key]
        fronts = [
            [run(inst, replace(cfg, seed=s)).points() for s in self.seeds] for inst in self.instances
        ]
        if self.refs is None:
            self.refs = [reference_point(fs) for fs in fronts]
        hv = [
            hypervolume_2d(f, ref, clip=True) for fs, ref in zip(fronts, self.refs) for f in fs
        ]
        score = float(np.mean(hv))
        self.cache[key] = score
        self.evaluations += 1
        log.info("tuning pop=%d p_cross=%.3f p_mut=%.3f -> %.6g", *key, score)
        return score


def _with(cfg: EngineConfig, **changes) -> EngineConfig:
    ops = cfg.operators
    if "p_cross" in changes:
        ops = replace(ops, p_cross=changes.pop("p_cross"))
    if "p_mut" in changes:
        ops = replace(ops, p_mut=changes.pop("p_mut"))
    return replace(cfg, operators=ops, **changes)


def tune_config(
    instances: list[Instance],
    base: EngineConfig,
    n_seeds: int = 5,
    master_seed: int = 0,
    iterations: int = 10,
    pop_step: float = 40,
    prob_step: float = 0.05,
    starts=TUNING_STARTS,
    start_pop: int = 100,
) -> tuple[EngineConfig, dict]:
    """Tune population size, then crossover and mutation probability, from
    each starting point; return the better final configuration (first start
    on ties) and a report with every trace."""
    seeds = derive_seeds(master_seed, n_seeds)
    scorer = _SessionScorer(instances, seeds)
    # a fixed MOEA/D neighbourhood bounds the population from below
    pop_guard = replace(
        POP_GUARD,
        lower=max(2, base.moead_neighborhood or 2),
        upper=base.ffe_budget,
    )
    outcomes = []
    for p_cross, p_mut in starts:
        cfg = _with(base, pop_size=pop_guard.apply(start_pop), p_cross=p_cross, p_mut=p_mut)
        results = []
        for name, step, guard in (
            ("pop_size", pop_step, pop_guard),
            ("p_cross", prob_step, PROB_GUARD),
            ("p_mut", prob_step, PROB_GUARD),
        ):
            current = cfg

            def objective(v, name=name, current=current):
                return scorer(_with(current, **{name: int(v) if name == "pop_size" else float(v)}))

            start = getattr(cfg, name)
            res = tune_parameter(objective, start, step, iterations, guard, name)
            results.append(res)
            cfg = _with(cfg, **{name: int(res.best_value) if name == "pop_size" else float(res.best_value)})
        outcomes.append((cfg, results[-1].best_score, results))

    best_idx = 0
    for i, (_, score, _) in enumerate(outcomes):
        if score > outcomes[best_idx][1]:
            best_idx = i
    report = {
        "seeds": seeds,
        "reference_points": [r.tolist() for r in scorer.refs or []],
        "distinct_configs_scored": scorer.evaluations,
        "starts": [
            {
                "p_cross": p_cross,
                "p_mut": p_mut,
                "final": cfg.to_dict(),
                "score": score,
                "parameters": [r.to_dict() for r in results],
            }
            for (p_cross, p_mut), (cfg, score, results) in zip(starts, outcomes)
        ],
        "chosen_start": best_idx,
    }
    return outcomes[best_idx][0], report
