import dataclasses

import numpy as np
import pytest

import usea.engine as engine
from usea.core import Population
from usea.engine import RunTrace, UseaConfig, run, run_variant, usea_run
from usea.problems import make_problem
from usea.surrogate import ForestParams, GPParams


def _config(**kw):
    defaults = dict(
        problem=make_problem("Ellipsoid", 5),
        pop_size=10,
        fes=60,
        operator="eda",
        surrogate="rf",
        seed=0,
        forest=ForestParams(n_trees=15),
    )
    defaults.update(kw)
    return UseaConfig(**defaults)


def _counting_problem(name="Ellipsoid", n=5):
    problem = make_problem(name, n)
    calls = {"n": 0}
    inner = problem.fn

    def counted(x):
        calls["n"] += 1
        return inner(x)

    return dataclasses.replace(problem, fn=counted), calls


def test_config_validation():
    with pytest.raises(ValueError):
        _config(pop_size=7)
    with pytest.raises(ValueError):
        _config(fes=5)
    with pytest.raises(ValueError):
        _config(operator="pso")
    with pytest.raises(ValueError):
        _config(variant="annealed")
    with pytest.raises(ValueError):
        _config(surrogate="xgb")
    assert _config(tau=30).tau_resolved == 30
    assert _config().tau_resolved == 20


def test_run_dispatch_guards():
    with pytest.raises(ValueError):
        run_variant(_config())
    with pytest.raises(ValueError):
        usea_run(_config(variant="ns"))


def test_budget_and_trace_shape():
    trace = usea_run(_config())
    assert len(trace.best_curve) == 60
    assert len(trace.generations) == 50  # one evaluation per generation after init
    assert trace.final_y == trace.best_curve[-1]
    assert np.all(np.diff(trace.best_curve) <= 0)


def test_exact_evaluation_accounting_all_variants():
    for variant in ("usea", "al", "ns", "baseline"):
        problem, calls = _counting_problem()
        cfg = _config(problem=problem, variant=variant)
        trace = run(cfg)
        assert calls["n"] == 60, variant
        assert len(trace.best_curve) == 60, variant


def test_bit_identical_reruns():
    for variant in ("usea", "al", "ns", "baseline"):
        a = run(_config(variant=variant, seed=11))
        b = run(_config(variant=variant, seed=11))
        assert np.array_equal(a.best_curve, b.best_curve), variant
        assert np.array_equal(a.final_x, b.final_x)
        assert a.final_y == b.final_y
        assert a.generations == b.generations


def test_seeds_differ():
    a = usea_run(_config(seed=1))
    b = usea_run(_config(seed=2))
    assert not np.array_equal(a.best_curve, b.best_curve)


def test_generation_arithmetic_al_and_baseline():
    # al evaluates half the population per generation, baseline all of it
    trace = run(_config(variant="al"))
    assert len(trace.generations) == 10  # (60 - 10) / 5
    assert all(g.n_evaluated == 5 for g in trace.generations)
    trace = run(_config(variant="baseline"))
    assert len(trace.generations) == 5  # (60 - 10) / 10
    assert all(g.n_evaluated == 10 for g in trace.generations)
    assert all(g.surrogate is None for g in trace.generations)


def test_pu_members_never_in_archive():
    problem = make_problem("Griewank", 4)
    cfg = UseaConfig(problem=problem, pop_size=8, fes=40, seed=3, forest=ForestParams(n_trees=10))

    seen_archive = []
    original_insert = engine.archive_insert

    def tracking_insert(archive, x, y):
        seen_archive.append(np.asarray(x).copy())
        return original_insert(archive, x, y)

    pools = []
    original_select = engine.model_assisted_select

    def tracking_select(offspring, model):
        o_star, pool = original_select(offspring, model)
        pools.append(pool)
        return o_star, pool

    engine.archive_insert = tracking_insert
    engine.model_assisted_select = tracking_select
    try:
        usea_run(cfg)
    finally:
        engine.archive_insert = original_insert
        engine.model_assisted_select = original_select

    archive_rows = {tuple(x) for x in seen_archive}
    for pool in pools:
        for member in pool:
            assert tuple(member.x) not in archive_rows


def test_ns_equals_usea_with_forced_empty_pool():
    cfg_ns = _config(variant="ns", seed=21)
    trace_ns = run_variant(cfg_ns)

    original = engine._reproduce

    def dropping(config, p_eval, p_uneval, bounds, rng):
        return original(config, p_eval, Population.unevaluated(), bounds, rng)

    engine._reproduce = dropping
    try:
        trace_forced = usea_run(_config(variant="usea", seed=21))
    finally:
        engine._reproduce = original

    assert np.array_equal(trace_ns.best_curve, trace_forced.best_curve)
    assert trace_ns.final_y == trace_forced.final_y


def test_gp_surrogate_runs_and_falls_back_cleanly():
    trace = run(_config(surrogate="gp", fes=30))
    assert len(trace.best_curve) == 30
    assert all(g.surrogate in ("gp", "rf") for g in trace.generations)
    # an unfactorizable GP configuration falls back to the forest every generation
    trace = run(_config(surrogate="gp", fes=20, gp=GPParams(noise=0.0, max_jitter=1e-13), seed=5))
    assert len(trace.best_curve) == 20


def test_all_operators_run():
    for operator in ("ga", "de", "eda"):
        trace = run(_config(operator=operator, fes=30, seed=6))
        assert len(trace.best_curve) == 30, operator


def test_stochastic_problem_reproducible():
    cfg = _config(problem=make_problem("YLLF07", 5), fes=30, seed=8)
    a, b = run(cfg), run(cfg)
    assert np.array_equal(a.best_curve, b.best_curve)


def test_trace_round_trip():
    trace = usea_run(_config(fes=30, seed=9))
    doc = trace.to_dict(include_generations=True)
    back = RunTrace.from_dict(doc)
    assert np.array_equal(back.best_curve, trace.best_curve)
    assert back.generations == trace.generations
    assert back.final_y == trace.final_y
    slim = RunTrace.from_dict(trace.to_dict(include_generations=False))
    assert slim.generations == ()
