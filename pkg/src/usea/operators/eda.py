"""EDA reproduction through a per-dimension variable-width histogram model.

The two outermost bins stretch from the box bounds to just beyond the
population's extreme values and carry a small exploration weight; the interior
bins tile the populated range uniformly and are weighted by occupancy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Bounds, Individual, Population, RngStream

BOUNDARY_WEIGHT = 0.1


@dataclass(frozen=True)
class EDAParams:
    K: int = 10  # bins per dimension: two boundary bins + K-2 interior bins

    def __post_init__(self):
        if self.K < 3:
            raise ValueError("need K >= 3 (two boundary bins plus at least one interior bin)")


@dataclass(frozen=True, eq=False)
class VWHModel:
    edges: np.ndarray  # (n, K+1), ascending per row, edges[:,0]=lb, edges[:,K]=ub
    probs: np.ndarray  # (n, K), nonnegative, each row sums to 1

    @property
    def n(self) -> int:
        return self.edges.shape[0]

    @property
    def n_bins(self) -> int:
        return self.probs.shape[1]


def vwh_build(xs: np.ndarray, k_bins: int, bounds: Bounds) -> VWHModel:
    """Fit the variable-width histogram to a population coordinate matrix.

    Per dimension the inner edge next to each bound sits half the gap between
    the two extreme values beyond the extreme one (clipped to the bounds), the
    interior is tiled uniformly with K-2 bins, interior bins are weighted by
    occupancy (right-open intervals, the last interior bin right-closed) and
    boundary bins get a 0.1 weight when they have positive width, else 0.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[0] < 2:
        raise ValueError("need an (m, n) matrix with m >= 2 to place the adaptive edges")
    m, n = xs.shape
    if n != bounds.n:
        raise ValueError("dimension mismatch with bounds")
    k = int(k_bins)
    if k < 3:
        raise ValueError("need K >= 3")

    edges = np.empty((n, k + 1))
    probs = np.empty((n, k))
    srt = np.sort(xs, axis=0)
    for i in range(n):
        lo, hi = bounds.lower[i], bounds.upper[i]
        x1min, x2min = srt[0, i], srt[1, i]
        x1max, x2max = srt[-1, i], srt[-2, i]
        a1 = max(x1min - 0.5 * (x2min - x1min), lo)
        a2 = min(x1max + 0.5 * (x1max - x2max), hi)
        if a2 <= a1:
            # all values coincide: give the interior a machine-safe width around them
            h = max(1e-9 * (hi - lo), 1e-12)
            a1 = max(x1min - 0.5 * h, lo)
            a2 = min(x1max + 0.5 * h, hi)
        row = edges[i]
        row[0], row[k] = lo, hi
        row[1 : k] = a1 + (a2 - a1) / (k - 2) * np.arange(k - 1)
        row[k - 1] = a2  # exact despite the tiling arithmetic

        idx = np.searchsorted(row, xs[:, i], side="right") - 1
        idx = np.clip(idx, 1, k - 2)  # the only clipped case is v == a2 (right-closed last interior)
        weights = np.bincount(idx, minlength=k).astype(np.float64)
        weights[0] = BOUNDARY_WEIGHT if row[1] > row[0] else 0.0
        weights[k - 1] = BOUNDARY_WEIGHT if row[k] > row[k - 1] else 0.0
        probs[i] = weights / weights.sum()
    return VWHModel(edges, probs)


def vwh_sample(model: VWHModel, n_samples: int, rng: RngStream) -> Population:
    """Draw samples: per dimension pick a bin by its probability, then uniform within it."""
    gen = rng.gen
    n, k = model.n, model.n_bins
    bin_u = gen.random((n_samples, n))
    pos_u = gen.random((n_samples, n))
    xs = np.empty((n_samples, n))
    for i in range(n):
        cum = np.cumsum(model.probs[i])
        b = np.searchsorted(cum, bin_u[:, i], side="right")
        b = np.minimum(b, k - 1)  # guards the u == cum[-1] edge under rounding
        lo = model.edges[i, b]
        hi = model.edges[i, b + 1]
        xs[:, i] = lo + pos_u[:, i] * (hi - lo)
    return Population.offspring(Individual(x) for x in xs)


def eda_reproduce_plain(
    p_eval: Population,
    n_offspring: int,
    params: EDAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """Plain EDA: model the evaluated population, sample offspring from it."""
    model = vwh_build(p_eval.xs(), params.K, bounds)
    return vwh_sample(model, n_offspring, rng)


def eda_reproduce(
    p_eval: Population,
    p_uneval: Population,
    n_offspring: int,
    params: EDAParams,
    bounds: Bounds,
    rng: RngStream,
) -> Population:
    """EDA reproduction with the histogram fitted on P_e union P_u."""
    if len(p_uneval):
        xs = np.vstack([p_eval.xs(), p_uneval.xs()])
    else:
        xs = p_eval.xs()
    model = vwh_build(xs, params.K, bounds)
    return vwh_sample(model, n_offspring, rng)
