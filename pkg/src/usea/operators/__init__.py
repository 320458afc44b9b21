from .ga import GAParams, ga_reproduce, ga_reproduce_plain, polynomial_mutation, sbx_crossover, tournament_select
from .de import (
    DE_VARIANTS,
    DEParams,
    boundary_repair,
    de_crossover,
    de_mutant,
    de_reproduce,
    de_reproduce_plain,
)
from .eda import EDAParams, VWHModel, eda_reproduce, eda_reproduce_plain, vwh_build, vwh_sample

__all__ = [
    "GAParams",
    "ga_reproduce",
    "ga_reproduce_plain",
    "polynomial_mutation",
    "sbx_crossover",
    "tournament_select",
    "DE_VARIANTS",
    "DEParams",
    "boundary_repair",
    "de_crossover",
    "de_mutant",
    "de_reproduce",
    "de_reproduce_plain",
    "EDAParams",
    "VWHModel",
    "eda_reproduce",
    "eda_reproduce_plain",
    "vwh_build",
    "vwh_sample",
]
