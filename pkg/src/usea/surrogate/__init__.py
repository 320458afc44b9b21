from .backends import active_backend_name, available_backends, get_backend
from .base import NotFittedError, SurrogateModel
from .forest import ForestParams, RandomForestModel
from .gp import GaussianProcessModel, GPFitError, GPParams
from .selection import expected_improvement, model_assisted_select
from .training import TrainingSet, select_training_data

SURROGATE_KINDS = ("rf", "gp")


def fit_surrogate(kind, ts, rng, forest_params=None, gp_params=None):
    """Fit the requested surrogate kind on a TrainingSet."""
    if kind == "rf":
        model = RandomForestModel(forest_params or ForestParams())
    elif kind == "gp":
        model = GaussianProcessModel(gp_params or GPParams())
    else:
        raise ValueError(f"unknown surrogate kind {kind!r}; choose from {SURROGATE_KINDS}")
    return model.fit(ts.X, ts.y, rng)


__all__ = [
    "NotFittedError",
    "SurrogateModel",
    "ForestParams",
    "RandomForestModel",
    "GaussianProcessModel",
    "GPFitError",
    "GPParams",
    "TrainingSet",
    "select_training_data",
    "expected_improvement",
    "model_assisted_select",
    "fit_surrogate",
    "SURROGATE_KINDS",
    "active_backend_name",
    "available_backends",
    "get_backend",
]
