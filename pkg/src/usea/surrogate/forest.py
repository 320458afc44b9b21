"""Random-forest regression on top of the compiled/pure tree kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import RngStream
from . import backends
from .base import SurrogateModel


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_depth: int | None = None            # None: unlimited
    min_samples_leaf: int = 2
    features_per_split: int | None = None   # None: max(1, n // 3)
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("need at least one tree")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")


class RandomForestModel(SurrogateModel):
    """Bagged CART regression trees; uncertainty is the across-tree spread.

    The per-tree bootstrap and split-feature subsets derive from a single
    64-bit seed drawn from the fit RngStream, so refits under the same stream
    are reproducible on either kernel backend.
    """

    def __init__(self, params: ForestParams = ForestParams(), backend: str | None = None):
        self.params = params
        self._backend = backends.get_backend(backend) if backend else backends.active_backend()
        self._forest = None
        self._n_features = 0

    @property
    def backend_name(self) -> str:
        return self._backend.NAME

    def fit(self, X: np.ndarray, y: np.ndarray, rng: RngStream | None = None) -> "RandomForestModel":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValueError("X must be (m, n) with matching targets")
        if X.shape[0] < 2:
            raise ValueError("need at least two training points")
        m, n = X.shape
        p = self.params
        f_try = p.features_per_split if p.features_per_split is not None else max(1, n // 3)
        f_try = min(max(1, f_try), n)
        depth = -1 if p.max_depth is None else int(p.max_depth)
        seed = int(rng.gen.integers(0, 2**63)) if rng is not None else 0
        sorted_cols = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable"), dtype=np.int32)
        XT = np.ascontiguousarray(X.T)
        self._forest = self._backend.fit_forest(
            XT, y, sorted_cols, p.n_trees, depth, p.min_samples_leaf, f_try, p.bootstrap, seed
        )
        self._n_features = n
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.predict_with_uncertainty(X)[0]

    def predict_with_uncertainty(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X = self._check_query(X, self._n_features, self._forest is not None)
        return self._backend.predict_forest(*self._forest, X)
