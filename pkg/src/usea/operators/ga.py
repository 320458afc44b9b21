"""GA reproduction: binary tournament, SBX, polynomial mutation, and the
variant that mixes surrogate-screened un-evaluated parents into the pool."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Bounds, Individual, Population, RngStream


@dataclass(frozen=True)
class GAParams:
    beta1: float = 1.0          # probability of drawing parents from the un-evaluated pool
    beta2: float = 0.8          # within that branch: probability of using both un-evaluated parents
    eta_c: float = 20.0         # SBX distribution index
    eta_m: float = 20.0         # polynomial-mutation distribution index
    p_m: float | None = None    # per-variable mutation probability; None means 1/n

    def __post_init__(self):
        if not (0.0 <= self.beta1 <= 1.0 and 0.0 <= self.beta2 <= 1.0):
            raise ValueError("beta1/beta2 must lie in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")
        if self.p_m is not None and not (0.0 <= self.p_m <= 1.0):
            raise ValueError("p_m must lie in [0, 1]")


def tournament_select(pop: Population, k: int, rng: RngStream) -> Individual:
    """k-ary tournament: draw k members with replacement, return the fittest.

    Works on evaluated or predicted fitness; ties go to the first-drawn member.
    """
    if len(pop) == 0:
        raise ValueError("cannot select from an empty population")
    idx = rng.gen.integers(0, len(pop), size=k)
    best = pop[idx[0]]
    best_f = best.fitness_value
    for i in idx[1:]:
        f = pop[i].fitness_value
        if f < best_f:
            best, best_f = pop[i], f
    return best


def _sbx_children(p1, p2, cross_u, beta_u, eta_c):
    """Deterministic SBX core given the uniform draws for masks and spread factors."""
    beta = np.where(
        beta_u <= 0.5,
        (2.0 * beta_u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - beta_u))) ** (1.0 / (eta_c + 1.0)),
    )
    beta = np.where(cross_u < 0.5, beta, 1.0)  # a variable not crossed keeps beta = 1 (identity)
    mean = 0.5 * (p1 + p2)
    diff = 0.5 * (p1 - p2)
    return mean + beta * diff, mean - beta * diff


def sbx_crossover(
    p1: np.ndarray,
    p2: np.ndarray,
    params: GAParams,
    bounds: Bounds,
    rng: RngStream,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover; each variable crosses with probability 0.5, children clipped."""
    if p1.shape != p2.shape:
        raise ValueError("parent dimension mismatch")
    gen = rng.gen
    cross_u = gen.random(p1.size)
    beta_u = gen.random(p1.size)
    c1, c2 = _sbx_children(p1, p2, cross_u, beta_u, params.eta_c)
    return bounds.clip(c1), bounds.clip(c2)


def _pm_child(x, sel_u, delta_u, eta_m, p_m, bounds):
    lo, hi = bounds.lower, bounds.upper
    span = hi - lo
    d1 = (x - lo) / span
    d2 = (hi - x) / span
    mut_pow = 1.0 / (eta_m + 1.0)
    low = 2.0 * delta_u + (1.0 - 2.0 * delta_u) * (1.0 - d1) ** (eta_m + 1.0)
    high = 2.0 * (1.0 - delta_u) + 2.0 * (delta_u - 0.5) * (1.0 - d2) ** (eta_m + 1.0)
    deltaq = np.where(delta_u <= 0.5, low**mut_pow - 1.0, 1.0 - high**mut_pow)
    mutated = x + deltaq * span
    return np.clip(np.where(sel_u < p_m, mutated, x), lo, hi)


def polynomial_mutation(x: np.ndarray, params: GAParams, bounds: Bounds, rng: RngStream) -> np.ndarray:
    """Polynomial mutation with index eta_m; each variable mutates with probability p_m."""
    p_m = params.p_m if params.p_m is not None else 1.0 / x.size
    gen = rng.gen
    sel_u = gen.random(x.size)
    delta_u = gen.random(x.size)
    return _pm_child(x, sel_u, delta_u, params.eta_m, p_m, bounds)


def _pair_offspring(p1, p2, params, bounds, rng):
    c1, c2 = sbx_crossover(p1.x, p2.x, params, bounds, rng)
    c1 = polynomial_mutation(c1, params, bounds, rng)
    c2 = polynomial_mutation(c2, params, bounds, rng)
    return Individual(c1), Individual(c2)


def ga_reproduce_plain(
    parents: Population,
    n_offspring: int,
    params: GAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """Plain GA: binary tournament on the evaluated parents, then SBX + PM per pair."""
    if len(parents) < 2:
        raise ValueError("need at least two parents")
    if n_offspring % 2 != 0 or n_offspring < 2:
        raise ValueError("offspring count must be even and positive")
    out = []
    for _ in range(n_offspring // 2):
        p1 = tournament_select(parents, 2, rng)
        p2 = tournament_select(parents, 2, rng)
        out.extend(_pair_offspring(p1, p2, params, bounds, rng))
    return Population.offspring(out)


def ga_reproduce(
    p_eval: Population,
    p_uneval: Population,
    n_offspring: int,
    params: GAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """GA reproduction drawing parents from both evaluated and un-evaluated pools.

    Per pair: tournament candidates are drawn from each pool. With probability
    beta1 the un-evaluated side supplies parents; inside that branch, with
    probability beta2 both parents are un-evaluated, otherwise a fair draw
    replaces exactly one evaluated parent. With an empty un-evaluated pool the
    operator silently degrades to the plain GA (same draws, bit-identical).
    """
    if len(p_eval) < 2:
        raise ValueError("need at least two evaluated parents")
    if n_offspring % 2 != 0 or n_offspring < 2:
        raise ValueError("offspring count must be even and positive")
    gen = rng.gen
    out = []
    for _ in range(n_offspring // 2):
        se1 = tournament_select(p_eval, 2, rng)
        se2 = tournament_select(p_eval, 2, rng)
        if len(p_uneval):
            su1 = tournament_select(p_uneval, 2, rng)
            su2 = tournament_select(p_uneval, 2, rng)
            if gen.random() < params.beta1:
                if gen.random() < params.beta2:
                    pair = (su1, su2)
                elif gen.random() < 0.5:
                    pair = (se1, su2)
                else:
                    pair = (su1, se2)
            else:
                pair = (se1, se2)
        else:
            pair = (se1, se2)
        out.extend(_pair_offspring(pair[0], pair[1], params, bounds, rng))
    return Population.offspring(out)
