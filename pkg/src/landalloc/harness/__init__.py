"""Experiment orchestration: tuning, batch runs and comparison reports."""

from .compare import compare, load_archive, write_table_csv
from .experiment import ExperimentPlan, run_cell, run_experiment
from .tuning import (
    POP_GUARD,
    PROB_GUARD,
    TUNING_STARTS,
    Guard,
    TuningResult,
    TuningStep,
    derive_seeds,
    tune_config,
    tune_parameter,
)

__all__ = [
    "POP_GUARD",
    "PROB_GUARD",
    "TUNING_STARTS",
    "ExperimentPlan",
    "Guard",
    "TuningResult",
    "TuningStep",
    "compare",
    "derive_seeds",
    "load_archive",
    "run_cell",
    "run_experiment",
    "tune_config",
    "tune_parameter",
    "write_table_csv",
]
