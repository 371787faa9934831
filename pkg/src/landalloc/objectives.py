"""The two minimised objectives and evaluation-budget accounting.

LAP is the normalised productivity loss of the converted cells. TEL measures
compactness; two readings are available:

``boundary`` (default)
    number of 4-adjacent cell pairs with different categories plus one per
    cell side on the grid border.
``literal``
    the same-category neighbour sum, each adjacent pair counted from both
    sides (so it equals twice the number of same-category pairs).
"""

from __future__ import annotations

import threading
from typing import NamedTuple

import numpy as np

from .errors import BudgetExhausted, ContractError
from .genotype import decode, unitation
from .instance import AGRICULTURAL, URBAN, Instance

TEL_MODES = ("boundary", "literal")


class ObjectivePoint(NamedTuple):
    lap: float
    tel: float


class FFECounter:
    """Counts fitness-function evaluations against a fixed budget.

    ``charge`` is an atomic check-and-increment, so one counter can be shared
    by threads evaluating candidates of the same run.
    """

    def __init__(self, budget: int):
        if budget < 0:
            raise ContractError("budget must be non-negative")
        self.budget = int(budget)
        self.used = 0
        self._lock = threading.Lock()

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    def charge(self, n: int = 1) -> None:
        with self._lock:
            if self.used + n > self.budget:
                raise BudgetExhausted(f"evaluation budget of {self.budget} FFE exhausted")
            self.used += n


def eval_lap(m: np.ndarray, inst: Instance) -> float:
    converted = (inst.categories == AGRICULTURAL) & (np.asarray(m) == URBAN)
    return float(inst.soil[converted].sum() / inst.soil_total)


def _same_pairs(m: np.ndarray) -> int:
    return int(np.count_nonzero(m[1:, :] == m[:-1, :]) + np.count_nonzero(m[:, 1:] == m[:, :-1]))


def eval_tel(m: np.ndarray, inst: Instance | None = None, mode: str = "boundary") -> float:
    m = np.asarray(m)
    rows, cols = m.shape
    if mode == "boundary":
        total_pairs = rows * (cols - 1) + cols * (rows - 1)
        return float(total_pairs - _same_pairs(m) + 2 * (rows + cols))
    if mode == "literal":
        return float(2 * _same_pairs(m))
    raise ContractError(f"unknown TEL mode {mode!r}; expected one of {TEL_MODES}")


def objectives(g, inst: Instance, tel_mode: str = "boundary") -> ObjectivePoint:
    """Objective pair without budget accounting (for oracles and reporting)."""
    m = decode(g, inst)
    lap = float(inst.agri_soil[np.asarray(g, dtype=bool)].sum() / inst.soil_total)
    return ObjectivePoint(lap, eval_tel(m, inst, tel_mode))


def evaluate(g, inst: Instance, counter: FFECounter, tel_mode: str = "boundary") -> ObjectivePoint:
    """Evaluate a feasible genotype, charging exactly one FFE.

    Raises:
        ContractError: the genotype is infeasible (u(x) != T).
        BudgetExhausted: the counter has no evaluations left; nothing is computed.
    """
    if len(g) != inst.n_vars or unitation(g) != inst.budget:
        raise ContractError(
            f"cannot evaluate an infeasible genotype (u={unitation(g)}, T={inst.budget})"
        )
    if tel_mode not in TEL_MODES:
        raise ContractError(f"unknown TEL mode {tel_mode!r}")
    counter.charge()
    return objectives(g, inst, tel_mode)
