"""Gaussian-process regression with a squared-exponential kernel.

Inputs are rescaled to the unit box from the training data, targets are
standardized, and the isotropic lengthscale is picked by maximizing the log
marginal likelihood over a fixed log-spaced grid. Deterministic by
construction; the fit consumes no random draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .base import SurrogateModel


class GPFitError(RuntimeError):
    """Kernel-matrix factorization failed at every jitter level."""


def _default_grid() -> tuple[float, ...]:
    return tuple(np.logspace(np.log10(0.05), np.log10(2.0), 16))


@dataclass(frozen=True)
class GPParams:
    lengthscales: tuple[float, ...] = field(default_factory=_default_grid)
    noise: float = 1e-6       # diagonal noise variance on standardized targets
    max_jitter: float = 1e-2  # escalation ceiling when factorization fails

    def __post_init__(self):
        if not self.lengthscales or any(l <= 0 for l in self.lengthscales):
            raise ValueError("lengthscale grid must be positive")
        if self.noise < 0:
            raise ValueError("noise variance cannot be negative")


def _sq_dists(A, B):
    aa = np.sum(A * A, axis=1)
    bb = np.sum(B * B, axis=1)
    return np.maximum(aa[:, None] + bb[None, :] - 2.0 * A @ B.T, 0.0)


class GaussianProcessModel(SurrogateModel):
    def __init__(self, params: GPParams = GPParams()):
        self.params = params
        self._fitted = False
        self._n_features = 0

    def _jitter_levels(self):
        yield self.params.noise
        level = max(self.params.noise, 1e-12) * 10.0
        while level <= self.params.max_jitter:
            yield level
            level *= 10.0

    def fit(self, X: np.ndarray, y: np.ndarray, rng=None) -> "GaussianProcessModel":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != y.size:
            raise ValueError("X must be (m, n) with matching targets")
        m, n = X.shape
        if m < 2:
            raise ValueError("need at least two training points")

        self._x_lo = X.min(axis=0)
        span = X.max(axis=0) - self._x_lo
        self._x_span = np.where(span > 0, span, 1.0)
        X01 = (X - self._x_lo) / self._x_span
        self._y_mean = float(np.mean(y))
        std = float(np.std(y))
        self._y_std = std if std > 0 else 1.0
        ys = (y - self._y_mean) / self._y_std

        d2 = _sq_dists(X01, X01)
        best = None
        for ell in self.params.lengthscales:
            K = np.exp(-d2 / (2.0 * ell * ell))
            for level in self._jitter_levels():
                try:
                    L = np.linalg.cholesky(K + level * np.eye(m))
                except np.linalg.LinAlgError:
                    continue
                alpha = solve_triangular(
                    L.T, solve_triangular(L, ys, lower=True), lower=False
                )
                lml = (
                    -0.5 * float(ys @ alpha)
                    - float(np.sum(np.log(np.diag(L))))
                    - 0.5 * m * np.log(2.0 * np.pi)
                )
                if best is None or lml > best[0]:
                    best = (lml, ell, level, L, alpha)
                break
        if best is None:
            raise GPFitError(
                f"cholesky failed for every lengthscale up to jitter {self.params.max_jitter}"
            )
        _, self.lengthscale, self.noise_used, self._L, self._alpha = best
        self._X01 = X01
        self._n_features = n
        self._fitted = True
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = self._check_query(X, self._n_features, self._fitted)
        Kq = self._kq(X)
        return Kq @ self._alpha * self._y_std + self._y_mean

    def predict_with_uncertainty(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X = self._check_query(X, self._n_features, self._fitted)
        Kq = self._kq(X)
        mean = Kq @ self._alpha * self._y_std + self._y_mean
        V = solve_triangular(self._L, Kq.T, lower=True)
        var = np.maximum(1.0 - np.sum(V * V, axis=0), 0.0)
        return mean, np.sqrt(var) * self._y_std

    def _kq(self, X):
        X01 = (X - self._x_lo) / self._x_span
        ell = self.lengthscale
        return np.exp(-_sq_dists(X01, self._X01) / (2.0 * ell * ell))
