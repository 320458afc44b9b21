"""Optimization engine: the surrogate-assisted loop with un-evaluated parent
injection, its ablation variants, and seeded run traces."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import Archive, Population, RngStream, archive_insert, population_update
from .operators import (
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
from .problems import Problem
from .sampling import lhs_init
from .surrogate import (
    ForestParams,
    GPFitError,
    GPParams,
    fit_surrogate,
    model_assisted_select,
    select_training_data,
)

OPERATORS = ("ga", "de", "eda")
VARIANTS = ("usea", "al", "ns", "baseline")


@dataclass(frozen=True)
class UseaConfig:
    """One seeded run: problem, budget, operator/surrogate choices and variant."""

    problem: Problem
    pop_size: int = 50
    fes: int = 500
    operator: str = "eda"
    surrogate: str = "rf"
    variant: str = "usea"
    seed: int = 0
    tau: int | None = None  # surrogate training size; None means 2 * pop_size
    ga: GAParams = GAParams()
    de: DEParams = DEParams()
    eda: EDAParams = EDAParams()
    forest: ForestParams = ForestParams()
    gp: GPParams = GPParams()

    def __post_init__(self):
        if self.pop_size < 2 or self.pop_size % 2 != 0:
            raise ValueError("population size must be even and >= 2")
        if self.fes < self.pop_size:
            raise ValueError("evaluation budget must cover the initial design (fes >= pop size)")
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}; choose from {OPERATORS}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.surrogate not in ("rf", "gp"):
            raise ValueError(f"unknown surrogate {self.surrogate!r}; choose from ('rf', 'gp')")
        if self.tau is not None and self.tau < 2:
            raise ValueError("tau must be >= 2")

    @property
    def tau_resolved(self) -> int:
        return self.tau if self.tau is not None else 2 * self.pop_size


@dataclass(frozen=True)
class GenerationRecord:
    gen: int
    fes: int                  # archive size after this generation
    n_evaluated: int
    o_star_pred: float | None
    o_star_value: float | None
    pu_pred_min: float | None
    pu_pred_mean: float | None
    pu_pred_max: float | None
    surrogate: str | None
    gp_fallback: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class RunTrace:
    """Per-evaluation best-so-far curve and per-generation records for one seeded run."""

    problem: str
    dim: int
    operator: str
    surrogate: str
    variant: str
    pop_size: int
    fes: int
    tau: int
    seed: int
    best_curve: np.ndarray
    final_x: np.ndarray
    final_y: float
    generations: tuple[GenerationRecord, ...]
    wall_clock: float
    algorithm: str = ""

    def to_dict(self, include_generations: bool = True) -> dict:
        d = {
            "schema_version": 1,
            "problem": self.problem,
            "dim": self.dim,
            "operator": self.operator,
            "surrogate": self.surrogate,
            "variant": self.variant,
            "pop_size": self.pop_size,
            "fes": self.fes,
            "tau": self.tau,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "best_curve": [float(v) for v in self.best_curve],
            "final_x": [float(v) for v in self.final_x],
            "final_y": float(self.final_y),
            "wall_clock": float(self.wall_clock),
        }
        if include_generations:
            d["generations"] = [g.to_dict() for g in self.generations]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunTrace":
        gens = tuple(GenerationRecord(**g) for g in d.get("generations", []))
        return cls(
            problem=d["problem"],
            dim=int(d["dim"]),
            operator=d["operator"],
            surrogate=d["surrogate"],
            variant=d["variant"],
            pop_size=int(d["pop_size"]),
            fes=int(d["fes"]),
            tau=int(d["tau"]),
            seed=int(d["seed"]),
            best_curve=np.asarray(d["best_curve"], dtype=np.float64),
            final_x=np.asarray(d["final_x"], dtype=np.float64),
            final_y=float(d["final_y"]),
            generations=gens,
            wall_clock=float(d["wall_clock"]),
            algorithm=d.get("algorithm", ""),
        )


def _reproduce(config, p_eval, p_uneval, bounds, rng) -> Population:
    if config.operator == "ga":
        return ga_reproduce(p_eval, p_uneval, config.pop_size, config.ga, bounds, rng)
    if config.operator == "de":
        return de_reproduce(p_eval, p_uneval, config.pop_size, config.de, config.ga, bounds, rng)
    return eda_reproduce(p_eval, p_uneval, config.pop_size, config.eda, bounds, rng)


def _reproduce_plain(config, p_eval, bounds, rng) -> Population:
    if config.operator == "ga":
        return ga_reproduce_plain(p_eval, config.pop_size, config.ga, bounds, rng)
    if config.operator == "de":
        return de_reproduce_plain(p_eval, config.pop_size, config.de, config.ga, bounds, rng)
    return eda_reproduce_plain(p_eval, config.pop_size, config.eda, bounds, rng)


def _fit_model(config, ts, rng):
    """Fit the configured surrogate; a GP factorization failure falls back to RF."""
    if config.surrogate == "gp":
        try:
            return fit_surrogate("gp", ts, rng, gp_params=config.gp), "gp", False
        except GPFitError:
            return fit_surrogate("rf", ts, rng, forest_params=config.forest), "rf", True
    return fit_surrogate("rf", ts, rng, forest_params=config.forest), "rf", False


def _run(config: UseaConfig) -> RunTrace:
    problem = config.problem
    n_pop, budget = config.pop_size, config.fes
    rng = RngStream(config.seed)
    rng_init = rng.child("init")
    rng_op = rng.child("op")
    rng_model = rng.child("model")
    rng_noise = rng.child("noise")

    t0 = time.perf_counter()
    archive = Archive()
    best_curve = np.empty(budget)
    best = np.inf

    def evaluate(x) -> float:
        nonlocal archive, best
        y = problem.evaluate(x, rng_noise)
        archive = archive_insert(archive, x, y)
        if y < best:
            best = y
        best_curve[archive.fes - 1] = best
        return y

    init = lhs_init(n_pop, problem.bounds, rng_init)
    for ind in init.members[: min(n_pop, budget)]:  # truncate if the budget cannot cover init
        evaluate(ind.x)

    p_eval = population_update(archive, n_pop)
    p_uneval = Population.unevaluated()
    empty = Population.unevaluated()
    tau = config.tau_resolved
    records: list[GenerationRecord] = []
    gen = 0

    while archive.fes < budget:
        gen += 1
        fes_before = archive.fes
        rep_pool = p_uneval if config.variant == "usea" else empty
        if config.variant == "baseline":
            offspring = _reproduce_plain(config, p_eval, problem.bounds, rng_op)
            for ind in offspring.members[: budget - archive.fes]:
                evaluate(ind.x)
            records.append(
                GenerationRecord(
                    gen, archive.fes, archive.fes - fes_before,
                    None, None, None, None, None, None,
                )
            )
        else:
            offspring = _reproduce(config, p_eval, rep_pool, problem.bounds, rng_op)
            ts = select_training_data(archive, tau)
            model, used, fell_back = _fit_model(config, ts, rng_model)
            o_star, selected = model_assisted_select(offspring, model)
            if config.variant == "al":
                # evaluate the full model-selected half: ranks 1..N/2
                chosen = (o_star,) + selected.members[: n_pop // 2 - 1]
                chosen = chosen[: budget - archive.fes]
                o_star_value = evaluate(chosen[0].x)
                for ind in chosen[1:]:
                    evaluate(ind.x)
                p_uneval = empty
            else:  # usea and ns both evaluate only the predicted best
                o_star_value = evaluate(o_star.x)
                p_uneval = selected
            pu_preds = selected.fitness_values() if len(selected) else None
            records.append(
                GenerationRecord(
                    gen, archive.fes, archive.fes - fes_before,
                    float(o_star.fitness_value), float(o_star_value),
                    float(pu_preds.min()) if pu_preds is not None else None,
                    float(pu_preds.mean()) if pu_preds is not None else None,
                    float(pu_preds.max()) if pu_preds is not None else None,
                    used, fell_back,
                )
            )
        p_eval = population_update(archive, n_pop)

    final_x, final_y = archive.best()
    return RunTrace(
        problem=problem.name,
        dim=problem.n,
        operator=config.operator,
        surrogate=config.surrogate,
        variant=config.variant,
        pop_size=n_pop,
        fes=budget,
        tau=tau,
        seed=config.seed,
        best_curve=best_curve[: archive.fes],
        final_x=np.array(final_x),
        final_y=float(final_y),
        generations=tuple(records),
        wall_clock=time.perf_counter() - t0,
    )


def usea_run(config: UseaConfig) -> RunTrace:
    """Run the main algorithm (variant 'usea')."""
    if config.variant != "usea":
        raise ValueError("usea_run expects variant='usea'; use run_variant for ablations")
    return _run(config)


def run_variant(config: UseaConfig) -> RunTrace:
    """Run an ablation/baseline variant ('al', 'ns' or 'baseline')."""
    if config.variant == "usea":
        raise ValueError("run_variant expects an ablation variant; use usea_run for 'usea'")
    return _run(config)


def run(config: UseaConfig) -> RunTrace:
    """Dispatch on config.variant."""
    return _run(config)
