"""Training-set selection from the evaluation archive."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Archive


@dataclass(frozen=True, eq=False)
class TrainingSet:
    X: np.ndarray  # (m, n)
    y: np.ndarray  # (m,)
    tau: int       # number of records actually used

    def __len__(self) -> int:
        return self.y.size


def select_training_data(archive: Archive, tau: int) -> TrainingSet:
    """The tau archive records with the smallest objectives, in insertion order.

    When the archive holds fewer than tau records, all of them are used. Ties
    at the cutoff go to the earlier-inserted record.
    """
    if tau <= 0:
        raise ValueError("training size tau must be positive")
    if len(archive) == 0:
        raise ValueError("cannot select training data from an empty archive")
    ys = archive.y_array()
    take = min(tau, len(archive))
    chosen = np.sort(np.argsort(ys, kind="stable")[:take])
    X = np.stack([archive.xs[i] for i in chosen])
    return TrainingSet(X, ys[chosen], take)
