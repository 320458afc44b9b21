"""usea: surrogate-assisted evolutionary optimization that feeds high-quality
un-evaluated (surrogate-screened) solutions back into the parent pool."""

from .core import (
    Archive,
    Bounds,
    Evaluated,
    EvaluationError,
    Individual,
    Population,
    Predicted,
    RngStream,
    Role,
    archive_insert,
    population_update,
)
from .engine import OPERATORS, VARIANTS, GenerationRecord, RunTrace, UseaConfig, run, run_variant, usea_run
from .problems import LZG_NAMES, PROBLEM_NAMES, Problem, make_problem
from .sampling import lhs_init

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "Bounds",
    "Evaluated",
    "EvaluationError",
    "GenerationRecord",
    "Individual",
    "LZG_NAMES",
    "OPERATORS",
    "PROBLEM_NAMES",
    "Population",
    "Predicted",
    "Problem",
    "RngStream",
    "Role",
    "RunTrace",
    "UseaConfig",
    "VARIANTS",
    "archive_insert",
    "lhs_init",
    "make_problem",
    "population_update",
    "run",
    "run_variant",
    "usea_run",
]
