import math

import numpy as np
import pytest

from usea.core import Archive, Individual, Population, RngStream, archive_insert
from usea.surrogate import (
    ForestParams,
    GaussianProcessModel,
    GPFitError,
    GPParams,
    NotFittedError,
    RandomForestModel,
    expected_improvement,
    fit_surrogate,
    model_assisted_select,
    select_training_data,
)


def _archive(values):
    a = Archive()
    for i, v in enumerate(values):
        a = archive_insert(a, [float(i), -float(i)], float(v))
    return a


class FixedModel:
    """Test double returning canned predictions keyed by the query row order."""

    def __init__(self, preds):
        self.preds = np.asarray(preds, dtype=np.float64)

    def predict(self, X):
        return self.preds[: X.shape[0]]


def _offspring(n, dim=2, seed=0):
    rng = np.random.default_rng(seed)
    return Population.offspring(Individual(rng.uniform(-1, 1, dim)) for _ in range(n))


# --- training-set selection ---------------------------------------------------


def test_select_all_when_archive_small():
    ts = select_training_data(_archive([3.0, 1.0, 2.0]), 10)
    assert len(ts) == 3 and ts.tau == 3


def test_select_best_by_rank():
    ts = select_training_data(_archive([9.0, 2.0, 5.0]), 2)
    assert sorted(ts.y.tolist()) == [2.0, 5.0]


def test_select_preserves_insertion_order():
    ts = select_training_data(_archive([5.0, 1.0, 3.0, 0.5]), 3)
    assert ts.y.tolist() == [1.0, 3.0, 0.5]  # archive order, not rank order


def test_select_tie_at_cutoff_prefers_earlier():
    ts = select_training_data(_archive([2.0, 1.0, 2.0, 2.0]), 2)
    assert ts.y.tolist() == [2.0, 1.0]
    assert ts.X[0, 0] == 0.0


def test_select_rejects_bad_tau():
    with pytest.raises(ValueError):
        select_training_data(_archive([1.0]), 0)


# --- random forest --------------------------------------------------------------


def test_forest_exact_recall_single_tree():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    y = np.array([1.0, 2.0, 3.0])
    model = RandomForestModel(
        ForestParams(n_trees=1, bootstrap=False, min_samples_leaf=1, features_per_split=2)
    )
    model.fit(X, y, RngStream(0))
    assert np.allclose(model.predict(X), y)
    mean, std = model.predict_with_uncertainty(X)
    assert np.allclose(std, 0.0)  # a single tree has no across-tree spread


def test_forest_constant_targets():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, (20, 3))
    y = np.full(20, 4.2)
    model = RandomForestModel(ForestParams(n_trees=10)).fit(X, y, RngStream(1))
    assert np.allclose(model.predict(X), 4.2)


def test_forest_deterministic_per_stream():
    rng = np.random.default_rng(1)
    X = rng.uniform(-1, 1, (30, 4))
    y = rng.normal(size=30)
    q = rng.uniform(-1, 1, (7, 4))
    a = RandomForestModel().fit(X, y, RngStream(3)).predict(q)
    b = RandomForestModel().fit(X, y, RngStream(3)).predict(q)
    c = RandomForestModel().fit(X, y, RngStream(4)).predict(q)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_forest_predictions_bounded_by_targets():
    rng = np.random.default_rng(2)
    X = rng.uniform(-2, 2, (40, 3))
    y = rng.normal(size=40)
    model = RandomForestModel().fit(X, y, RngStream(0))
    preds = model.predict(rng.uniform(-3, 3, (200, 3)))
    assert np.all(preds >= y.min() - 1e-12) and np.all(preds <= y.max() + 1e-12)


def test_forest_permutation_equivariance():
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, (25, 3))
    y = rng.normal(size=25)
    model = RandomForestModel().fit(X, y, RngStream(5))
    q = rng.uniform(-1, 1, (10, 3))
    perm = rng.permutation(10)
    assert np.array_equal(model.predict(q)[perm], model.predict(q[perm]))


def test_forest_uncertainty_nonnegative():
    rng = np.random.default_rng(4)
    X = rng.uniform(-1, 1, (30, 2))
    y = rng.normal(size=30)
    _, std = RandomForestModel().fit(X, y, RngStream(0)).predict_with_uncertainty(X)
    assert np.all(std >= 0)


def test_forest_ensemble_averaging_reduces_error():
    # out-of-sample MSE on a noisy quadratic shrinks with more trees (20 seeds)
    gains = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        X = rng.uniform(-2, 2, (60, 2))
        y = np.sum(X**2, axis=1) + rng.normal(0, 0.5, 60)
        Xq = rng.uniform(-2, 2, (60, 2))
        yq = np.sum(Xq**2, axis=1)
        small = RandomForestModel(ForestParams(n_trees=1)).fit(X, y, RngStream(seed))
        large = RandomForestModel(ForestParams(n_trees=40)).fit(X, y, RngStream(seed))
        mse_small = np.mean((small.predict(Xq) - yq) ** 2)
        mse_large = np.mean((large.predict(Xq) - yq) ** 2)
        gains += mse_large < mse_small
    assert gains >= 16


def test_forest_rejects_queries_before_fit():
    with pytest.raises(NotFittedError):
        RandomForestModel().predict(np.zeros((1, 2)))


# --- gaussian process -----------------------------------------------------------


def test_gp_noiseless_interpolation():
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 1, (12, 2))
    y = np.sin(3 * X[:, 0]) + X[:, 1]
    model = GaussianProcessModel(GPParams(noise=0.0)).fit(X, y)
    assert np.max(np.abs(model.predict(X) - y)) < 1e-6
    _, std = model.predict_with_uncertainty(X)
    assert np.max(std) < 1e-6


def test_gp_training_stddev_bounded_by_noise():
    rng = np.random.default_rng(1)
    X = rng.uniform(-1, 1, (25, 3))
    y = rng.normal(size=25)
    model = GaussianProcessModel().fit(X, y)
    _, std = model.predict_with_uncertainty(X)
    y_std = np.std(y)
    assert np.all(std / y_std <= math.sqrt(model.noise_used) + 1e-6)


def test_gp_constant_targets():
    rng = np.random.default_rng(2)
    X = rng.uniform(-1, 1, (10, 2))
    model = GaussianProcessModel().fit(X, np.full(10, 7.0))
    assert np.allclose(model.predict(X), 7.0)


def test_gp_deterministic():
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, (15, 2))
    y = rng.normal(size=15)
    q = rng.uniform(-1, 1, (5, 2))
    assert np.array_equal(
        GaussianProcessModel().fit(X, y).predict(q),
        GaussianProcessModel().fit(X, y).predict(q),
    )


def test_gp_fit_error_when_unfactorizable():
    # duplicated inputs with conflicting targets and zero jitter allowance
    X = np.zeros((6, 2))
    y = np.arange(6.0)
    with pytest.raises(GPFitError):
        GaussianProcessModel(GPParams(noise=0.0, max_jitter=1e-13)).fit(X, y)


def test_gp_rejects_queries_before_fit():
    with pytest.raises(NotFittedError):
        GaussianProcessModel().predict(np.zeros((1, 2)))


def test_fit_surrogate_dispatch():
    ts = select_training_data(_archive([3.0, 1.0, 2.0]), 3)
    rf = fit_surrogate("rf", ts, RngStream(0))
    gp = fit_surrogate("gp", ts, RngStream(0))
    assert isinstance(rf, RandomForestModel)
    assert isinstance(gp, GaussianProcessModel)
    with pytest.raises(ValueError):
        fit_surrogate("xgb", ts, RngStream(0))


# --- expected improvement --------------------------------------------------------


def test_ei_zero_spread_no_improvement():
    assert expected_improvement(mean=5.0, stddev=0.0, best=4.0) == 0.0


def test_ei_zero_spread_deterministic_improvement():
    assert expected_improvement(mean=3.0, stddev=0.0, best=4.0) == 1.0


def test_ei_at_equal_mean():
    # at z = 0 the value is stddev * phi(0) = 1/sqrt(2*pi)
    expected = 1.0 / math.sqrt(2.0 * math.pi)
    assert abs(expected_improvement(mean=4.0, stddev=1.0, best=4.0) - expected) < 1e-12


def test_ei_vectorized_and_nonnegative():
    rng = np.random.default_rng(0)
    mean = rng.normal(size=100)
    std = np.abs(rng.normal(size=100))
    std[::7] = 0.0
    ei = expected_improvement(mean, std, best=0.2)
    assert ei.shape == (100,)
    assert np.all(ei >= 0)
    with pytest.raises(ValueError):
        expected_improvement(0.0, -1.0, 0.0)


# --- model-assisted selection ----------------------------------------------------


def test_select_rank_rule():
    offspring = _offspring(4)
    o_star, pool = model_assisted_select(offspring, FixedModel([3.0, 1.0, 2.0, 4.0]))
    assert np.array_equal(o_star.x, offspring[1].x)
    assert o_star.fitness_value == 1.0
    got = [m.fitness_value for m in pool]
    assert got == [2.0, 3.0]
    assert np.array_equal(pool[0].x, offspring[2].x)
    assert np.array_equal(pool[1].x, offspring[0].x)


def test_select_tie_rule_lowest_index():
    offspring = _offspring(4)
    o_star, pool = model_assisted_select(offspring, FixedModel([1.0, 1.0, 1.0, 1.0]))
    assert np.array_equal(o_star.x, offspring[0].x)
    assert np.array_equal(pool[0].x, offspring[1].x)
    assert np.array_equal(pool[1].x, offspring[2].x)


def test_select_pool_size_always_half():
    for n in (2, 4, 10, 50):
        offspring = _offspring(n, seed=n)
        preds = np.random.default_rng(n).normal(size=n)
        _, pool = model_assisted_select(offspring, FixedModel(preds))
        assert len(pool) == n // 2


def test_select_invariant_under_monotone_transform():
    rng = np.random.default_rng(1)
    for trial in range(500):
        n = int(rng.integers(2, 30))
        offspring = _offspring(n, seed=trial)
        preds = rng.normal(size=n)
        transform = lambda v: 3.0 * np.exp(0.5 * v) + 1.0
        o1, p1 = model_assisted_select(offspring, FixedModel(preds))
        o2, p2 = model_assisted_select(offspring, FixedModel(transform(preds)))
        assert np.array_equal(o1.x, o2.x)
        assert len(p1) == len(p2) == n // 2
        for a, b in zip(p1, p2):
            assert np.array_equal(a.x, b.x)


def test_select_requires_two_offspring():
    with pytest.raises(ValueError):
        model_assisted_select(_offspring(1), FixedModel([1.0]))
