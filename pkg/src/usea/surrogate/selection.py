"""Model-assisted selection of the evaluation candidate and the un-evaluated pool,
plus the expected-improvement acquisition used by the 1-D snapshot demo."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from ..core import Individual, Population, Predicted

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def expected_improvement(mean, stddev, best):
    """EI for minimization: (best-mean)*Phi(z) + stddev*phi(z) with z=(best-mean)/stddev.

    With zero spread this degrades to max(best - mean, 0). Accepts scalars or
    arrays; the return matches the broadcast shape.
    """
    mean = np.asarray(mean, dtype=np.float64)
    stddev = np.asarray(stddev, dtype=np.float64)
    if np.any(stddev < 0):
        raise ValueError("stddev must be nonnegative")
    impr = best - mean
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(stddev > 0, impr / np.where(stddev > 0, stddev, 1.0), 0.0)
        ei = np.where(
            stddev > 0,
            impr * ndtr(z) + stddev * np.exp(-0.5 * z * z) / _SQRT_2PI,
            np.maximum(impr, 0.0),
        )
    return float(ei) if ei.ndim == 0 else ei


def model_assisted_select(offspring: Population, model) -> tuple[Individual, Population]:
    """Rank offspring by surrogate prediction: best becomes the evaluation
    candidate, predicted ranks 2..N/2+1 become the un-evaluated pool.

    Ties break toward the lower offspring index. Every returned individual
    carries its prediction as a Predicted fitness.
    """
    if len(offspring) < 2:
        raise ValueError("need at least two offspring to select from")
    preds = np.asarray(model.predict(offspring.xs()), dtype=np.float64)
    order = np.argsort(preds, kind="stable")
    o_star = offspring[order[0]].with_fitness(Predicted(float(preds[order[0]])))
    half = len(offspring) // 2
    pool = [
        offspring[i].with_fitness(Predicted(float(preds[i])))
        for i in order[1 : half + 1]
    ]
    return o_star, Population.unevaluated(pool)
