"""Abstract regressor interface shared by the surrogate models."""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np


class NotFittedError(RuntimeError):
    """Prediction was requested from a model that has not been fitted."""


class SurrogateModel(ABC):
    """Regressor with a point prediction and an uncertainty estimate."""

    @abstractmethod
    def fit(self, X: np.ndarray, y: np.ndarray, rng=None) -> "SurrogateModel":
        ...

    @abstractmethod
    def predict(self, X: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def predict_with_uncertainty(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ...

    def _check_query(self, X, n_features, fitted):
        if not fitted:
            raise NotFittedError(f"{type(self).__name__} must be fitted before predicting")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != n_features:
            raise ValueError(f"expected (q, {n_features}) query matrix, got shape {X.shape}")
        return np.ascontiguousarray(X)
