"""Diagnostic demos: the two-cluster offspring-distribution study and the 1-D
surrogate uncertainty/EI snapshot. Both emit plot-ready dictionaries."""

from __future__ import annotations

import numpy as np

from ..core import Evaluated, Individual, Population, Predicted, RngStream
from ..operators import (
    DEParams,
    EDAParams,
    GAParams,
    de_reproduce,
    de_reproduce_plain,
    eda_reproduce,
    eda_reproduce_plain,
    ga_reproduce,
    ga_reproduce_plain,
)
from ..problems import make_problem
from ..sampling import lhs_init
from ..surrogate import ForestParams, RandomForestModel, expected_improvement

DEMO_OPERATORS = ("ga", "de", "eda")

# Two-cluster setup: parents near the local basin, an offspring cloud near the
# global basin of -x*sin(x) on [0, 12]. Cluster draws are clipped to the box.
PARENT_CLUSTER = (2.0, 0.6)
OFFSPRING_CLUSTER = (8.0, 0.8)
OPTIMAL_REGION = (6.0, 10.0)
CLUSTER_SIZE = 30

# The DE condition uses rand/1: difference-based variants anchored at the best
# member would place plain-operator offspring near it already, which is not the
# two-cluster contrast this study draws.
DEMO_DE_VARIANT = "rand/1"


def two_cluster_populations(rng: RngStream, n_parents: int = CLUSTER_SIZE):
    """Build (problem, P_e, P_u): parents with their worst member swapped for the
    best cloud member, and the better half of the cloud as the un-evaluated pool."""
    problem = make_problem("CaseStudy1D", 1)
    gen = rng.gen
    px = np.clip(gen.normal(*PARENT_CLUSTER, n_parents), 0.0, 12.0)
    cx = np.clip(gen.normal(*OFFSPRING_CLUSTER, n_parents), 0.0, 12.0)
    py = np.array([problem.evaluate(np.array([v])) for v in px])
    cy = np.array([problem.evaluate(np.array([v])) for v in cx])

    parents = [Individual(np.array([x]), Evaluated(float(y))) for x, y in zip(px, py)]
    best_c = int(np.argmin(cy))
    parents[int(np.argmax(py))] = Individual(np.array([cx[best_c]]), Evaluated(float(cy[best_c])))
    p_eval = Population.evaluated(parents)

    top = np.argsort(cy, kind="stable")[: n_parents // 2]
    p_uneval = Population.unevaluated(
        Individual(np.array([cx[i]]), Predicted(float(cy[i]))) for i in top
    )
    return problem, p_eval, p_uneval


def _de_offspring(p_eval, p_uneval, n_offspring, de_params, ga_params, bounds, rng):
    # DE targets iterate the parent population, so build the cloud in chunks
    chunk = len(p_eval)
    xs = []
    produced = 0
    while produced < n_offspring:
        if p_uneval is None:
            pop = de_reproduce_plain(p_eval, chunk, de_params, ga_params, bounds, rng)
        else:
            pop = de_reproduce(p_eval, p_uneval, chunk, de_params, ga_params, bounds, rng)
        xs.append(pop.xs())
        produced += chunk
    return np.vstack(xs)[:n_offspring]


def offspring_distribution_demo(
    operator: str,
    rng: RngStream,
    n_offspring: int = 10_000,
    n_bins: int = 60,
) -> dict:
    """Generate offspring clouds with and without the un-evaluated pool and
    report the fraction landing in the global-optimum region plus histograms."""
    if operator not in DEMO_OPERATORS:
        raise ValueError(f"unknown operator {operator!r}; choose from {DEMO_OPERATORS}")
    problem, p_eval, p_uneval = two_cluster_populations(rng.child("clusters"))
    bounds = problem.bounds
    ga = GAParams()
    de = DEParams(variant=DEMO_DE_VARIANT)
    eda = EDAParams()

    if operator == "ga":
        n_even = n_offspring + n_offspring % 2
        with_xs = ga_reproduce(p_eval, p_uneval, n_even, ga, bounds, rng.child("with")).xs()[:n_offspring]
        without_xs = ga_reproduce_plain(p_eval, n_even, ga, bounds, rng.child("without")).xs()[:n_offspring]
    elif operator == "de":
        with_xs = _de_offspring(p_eval, p_uneval, n_offspring, de, ga, bounds, rng.child("with"))
        without_xs = _de_offspring(p_eval, None, n_offspring, de, ga, bounds, rng.child("without"))
    else:
        with_xs = eda_reproduce(p_eval, p_uneval, n_offspring, eda, bounds, rng.child("with")).xs()
        without_xs = eda_reproduce_plain(p_eval, n_offspring, eda, bounds, rng.child("without")).xs()

    lo_r, hi_r = OPTIMAL_REGION
    edges = np.linspace(0.0, 12.0, n_bins + 1)

    def condition(xs):
        x = xs[:, 0]
        hist, _ = np.histogram(x, bins=edges)
        return {
            "fraction_in_optimal_region": float(np.mean((x >= lo_r) & (x <= hi_r))),
            "histogram": [int(c) for c in hist],
        }

    return {
        "schema_version": 1,
        "header": {
            "function": "minimize -x*sin(x) on [0, 12]",
            "parent_cluster": {"mean": PARENT_CLUSTER[0], "std": PARENT_CLUSTER[1]},
            "offspring_cluster": {"mean": OFFSPRING_CLUSTER[0], "std": OFFSPRING_CLUSTER[1]},
            "cluster_size": CLUSTER_SIZE,
            "optimal_region": list(OPTIMAL_REGION),
            "de_variant": DEMO_DE_VARIANT,
        },
        "operator": operator,
        "n_offspring": int(n_offspring),
        "bin_edges": [float(e) for e in edges],
        "with_pu": condition(with_xs),
        "without_pu": condition(without_xs),
    }


def case_study_1d(
    rng: RngStream,
    resolution: int = 401,
    n_train: int = 12,
    forest_params: ForestParams | None = None,
) -> dict:
    """Snapshot of forest mean/uncertainty and EI on the 1-D case function,
    next to the population-side ranking of an offspring cloud."""
    problem = make_problem("CaseStudy1D", 1)
    bounds = problem.bounds

    train = lhs_init(n_train, bounds, rng.child("train")).xs()
    train_y = np.array([problem.evaluate(x) for x in train])
    model = RandomForestModel(forest_params or ForestParams())
    model.fit(train, train_y, rng.child("fit"))

    grid = np.linspace(0.0, 12.0, resolution)
    mean, std = model.predict_with_uncertainty(grid[:, None])
    best = float(train_y.min())
    ei = expected_improvement(mean, std, best)
    at_train = model.predict(train)

    _, p_eval, p_uneval = two_cluster_populations(rng.child("clusters"))
    cloud = eda_reproduce(p_eval, p_uneval, CLUSTER_SIZE, EDAParams(), bounds, rng.child("op"))
    preds = model.predict(cloud.xs())
    order = np.argsort(preds, kind="stable")
    rank = np.empty(len(cloud), dtype=int)
    rank[order] = np.arange(1, len(cloud) + 1)
    half = len(cloud) // 2

    def selection_tag(r):
        if r == 1:
            return "evaluate"
        return "unevaluated" if r <= half + 1 else ""

    return {
        "schema_version": 1,
        "header": {
            "function": "minimize -x*sin(x) on [0, 12]",
            "n_train": int(n_train),
            "resolution": int(resolution),
            "incumbent_best": best,
        },
        "training": [{"x": float(x[0]), "y": float(y)} for x, y in zip(train, train_y)],
        "rf_at_train": [float(v) for v in at_train],
        "grid": [
            {"x": float(x), "rf_mean": float(m), "rf_std": float(s), "ei": float(e)}
            for x, m, s, e in zip(grid, mean, std, ei)
        ],
        "ei_argmax_x": float(grid[int(np.argmax(ei))]),
        "offspring": [
            {
                "x": float(ind.x[0]),
                "predicted": float(preds[i]),
                "rank": int(rank[i]),
                "selected_as": selection_tag(int(rank[i])),
            }
            for i, ind in enumerate(cloud)
        ],
    }
