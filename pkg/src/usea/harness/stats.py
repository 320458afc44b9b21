"""Nonparametric comparison statistics for experiment tables."""

from __future__ import annotations

import math

import numpy as np

MARK_BETTER = "+"
MARK_WORSE = "-"
MARK_SIMILAR = "~"


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_rank_sum(a, b, alpha: float = 0.05) -> tuple[float, str]:
    """Two-sided rank-sum test with midrank ties and tie-corrected normal variance.

    Returns (p, mark). The mark compares `a` against `b` under minimization:
    '+' means `a` is significantly better (lower), '-' significantly worse,
    '~' no significant difference at level `alpha`. Identical samples (or any
    degenerate all-tied case) report p = 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = a.size, b.size
    if n1 < 2 or n2 < 2:
        raise ValueError("need at least two observations per sample")
    pooled = np.concatenate([a, b])
    n = n1 + n2
    ranks = _midranks(pooled)
    w = float(np.sum(ranks[:n1]))
    mean_w = n1 * (n + 1) / 2.0
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(np.float64) ** 3 - tie_counts))
    var_w = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var_w <= 0:
        return 1.0, MARK_SIMILAR
    z = (w - mean_w) / math.sqrt(var_w)
    p = math.erfc(abs(z) / math.sqrt(2.0))  # = 2 * (1 - Phi(|z|))
    if p >= alpha:
        return p, MARK_SIMILAR
    diff = float(np.median(a) - np.median(b))
    if diff < 0:
        return p, MARK_BETTER
    if diff > 0:
        return p, MARK_WORSE
    return p, MARK_SIMILAR


def mean_rank(table: np.ndarray) -> np.ndarray:
    """Average per-row rank of each column (rows: problems, columns: algorithms).

    Ranks are 1..k ascending by value within a row; ties share the average rank.
    """
    table = np.asarray(table, dtype=np.float64)
    if table.ndim != 2 or table.size == 0:
        raise ValueError("need a (problems x algorithms) matrix")
    if not np.all(np.isfinite(table)):
        raise ValueError("mean_rank requires a complete table")
    ranks = np.vstack([_midranks(row) for row in table])
    return ranks.mean(axis=0)


def improvement_metric(baseline: float, variant: float) -> float:
    """Percent improvement of `variant` over `baseline`: (baseline - variant)/baseline * 100."""
    if baseline == 0:
        raise ValueError("improvement metric is undefined for a zero baseline")
    return (baseline - variant) / baseline * 100.0
