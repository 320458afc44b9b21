"""Differential evolution: five mutation variants, binomial crossover, and the
variant whose difference pool spans evaluated plus un-evaluated members."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Bounds, Individual, Population, RngStream
from .ga import GAParams, polynomial_mutation

DE_VARIANTS = ("rand/1", "rand/2", "best/1", "best/2", "current-to-best/1")

# pool vectors consumed by each variant (always drawn as 5, used in order)
_ARITY = {"rand/1": 3, "rand/2": 5, "best/1": 2, "best/2": 4, "current-to-best/1": 2}


@dataclass(frozen=True)
class DEParams:
    F: float = 0.5
    Cr: float = 0.9
    variant: str = "best/2"

    def __post_init__(self):
        if self.F <= 0:
            raise ValueError("scaling factor F must be positive")
        if not (0.0 <= self.Cr <= 1.0):
            raise ValueError("crossover rate Cr must lie in [0, 1]")
        if self.variant not in DE_VARIANTS:
            raise ValueError(f"unknown DE variant {self.variant!r}; choose from {DE_VARIANTS}")


def de_mutant(variant: str, x_i: np.ndarray, x_best: np.ndarray, pool, F: float) -> np.ndarray:
    """Mutant vector for the given variant; `pool` supplies x_r1..x_r5 in order."""
    if variant not in _ARITY:
        raise ValueError(f"unknown DE variant {variant!r}")
    need = _ARITY[variant]
    if len(pool) < need:
        raise ValueError(f"{variant} needs {need} pool vectors, got {len(pool)}")
    r = pool
    if variant == "rand/1":
        return r[0] + F * (r[1] - r[2])
    if variant == "rand/2":
        return r[0] + F * (r[1] - r[2]) + F * (r[3] - r[4])
    if variant == "best/1":
        return x_best + F * (r[0] - r[1])
    if variant == "best/2":
        return x_best + F * (r[0] - r[1]) + F * (r[2] - r[3])
    return x_i + F * (x_best - x_i) + F * (r[0] - r[1])  # current-to-best/1


def de_crossover(x_i: np.ndarray, v_i: np.ndarray, cr: float, rng: RngStream) -> np.ndarray:
    """Binomial crossover; a forced index guarantees at least one mutant component."""
    if x_i.shape != v_i.shape:
        raise ValueError("dimension mismatch between target and mutant")
    gen = rng.gen
    u = gen.random(x_i.size)
    forced = gen.integers(0, x_i.size)
    take = u <= cr
    take[forced] = True
    return np.where(take, v_i, x_i)


def boundary_repair(x: np.ndarray, bounds: Bounds) -> np.ndarray:
    """Clamp out-of-range components to the violated bound."""
    return bounds.clip(x)


def _trial(i, x_i, x_best, members, de_params, ga_params, bounds, rng):
    # 5 distinct pool members from the union minus the target, uniformly at random
    if len(members) - 1 < 5:
        raise ValueError("need at least 6 members across evaluated + un-evaluated pools")
    draws = rng.gen.choice(len(members) - 1, size=5, replace=False)
    pool = [members[j if j < i else j + 1].x for j in draws]
    v = de_mutant(de_params.variant, x_i, x_best, pool, de_params.F)
    u = de_crossover(x_i, v, de_params.Cr, rng)
    u = boundary_repair(u, bounds)
    return Individual(polynomial_mutation(u, ga_params, bounds, rng))


def _best_member(p_eval: Population) -> Individual:
    best = p_eval[0]
    for m in p_eval:
        if m.fitness_value < best.fitness_value:
            best = m
    return best


def de_reproduce_plain(
    p_eval: Population,
    n_offspring: int,
    de_params: DEParams,
    ga_params: GAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """Plain DE: targets iterate the evaluated population; pool drawn from it alone."""
    if len(p_eval) != n_offspring:
        raise ValueError("DE targets iterate the parent population: need |P_e| == N")
    x_best = _best_member(p_eval).x
    members = p_eval.members
    out = [
        _trial(i, p_eval[i].x, x_best, members, de_params, ga_params, bounds, rng)
        for i in range(n_offspring)
    ]
    return Population.offspring(out)


def de_reproduce(
    p_eval: Population,
    p_uneval: Population,
    n_offspring: int,
    de_params: DEParams,
    ga_params: GAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """DE reproduction with the difference pool drawn from P_e union P_u.

    Target and best individuals always come from the evaluated population;
    un-evaluated members only enter through the randomly drawn difference pool.
    Trials get boundary repair and a final polynomial mutation pass.
    """
    if len(p_eval) != n_offspring:
        raise ValueError("DE targets iterate the parent population: need |P_e| == N")
    x_best = _best_member(p_eval).x
    members = p_eval.members + p_uneval.members
    out = [
        _trial(i, p_eval[i].x, x_best, members, de_params, ga_params, bounds, rng)
        for i in range(n_offspring)
    ]
    return Population.offspring(out)
