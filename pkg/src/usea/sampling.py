"""Latin hypercube initialization."""

from __future__ import annotations

from .core import Bounds, Individual, Population, RngStream


def lhs_init(n_points: int, bounds: Bounds, rng: RngStream) -> Population:
    """Latin hypercube sample of `n_points` in the box, returned fitness-free.

    Each dimension is split into `n_points` equal-width strata; every stratum
    receives exactly one point, placed uniformly at random within it.
    """
    if n_points < 1:
        raise ValueError("need at least one sample")
    n = bounds.n
    lo, width = bounds.lower, bounds.width
    gen = rng.gen
    xs = gen.random((n_points, n))
    for i in range(n):
        strata = gen.permutation(n_points)
        xs[:, i] = lo[i] + (strata + xs[:, i]) / n_points * width[i]
    return Population.offspring(Individual(x) for x in xs)
