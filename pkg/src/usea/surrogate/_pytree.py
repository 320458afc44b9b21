"""Pure-python/numpy regression-forest kernel.

Fallback used when the compiled extension is unavailable. It mirrors the
compiled kernel draw for draw and accumulation for accumulation, so both
backends grow bit-identical forests from the same inputs: bootstrap weights and
per-node feature subsets come from the same splitmix64 stream, per-feature
orderings derive from one shared stable presort filtered to in-bag rows, and
every floating-point reduction is sequential.

The bootstrap is held as per-row integer weights, so node segments store each
in-bag row once; sample counts (min_samples_leaf, split validity, leaf means)
are weighted.
"""

from __future__ import annotations

import numpy as np

NAME = "pure"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class _SplitMix:
    """splitmix64 stream; the compiled kernel implements the same constants."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def bounded(self, bound: int) -> int:
        return self.next_u64() % bound


class _TreeBuilder:
    def __init__(self, XT, y, w, arena, msl, f_try, max_depth, rng):
        self.XT = XT  # feature-major (n_feats, m), mirroring the compiled kernel
        self.y = y
        self.w = w    # per-row bootstrap multiplicity
        self.arena = arena  # (n_feats, m_u) in-bag row ids, value-sorted per feature
        self.msl = msl
        self.f_try = f_try
        self.max_depth = max_depth
        self.rng = rng
        cap = 2 * XT.shape[1] + 1
        self.row_mask = np.zeros(XT.shape[1], dtype=bool)
        self.feature = np.full(cap, -1, dtype=np.int32)
        self.threshold = np.zeros(cap)
        self.left = np.full(cap, -1, dtype=np.int32)
        self.right = np.full(cap, -1, dtype=np.int32)
        self.value = np.zeros(cap)
        self.n_nodes = 0

    def build(self, lo, hi, depth, node_sum, node_w):
        """Preorder build of the unique-row segment [lo, hi); the weighted target
        sum and weight total are threaded from the parent split."""
        nid = self.n_nodes
        self.n_nodes += 1
        s = hi - lo
        if node_w < 2 * self.msl or (0 <= self.max_depth <= depth):
            self.value[nid] = node_sum / node_w
            return nid
        ys0 = self.y[self.arena[0, lo:hi]]
        if np.all(ys0 == ys0[0]):
            self.value[nid] = node_sum / node_w
            return nid

        n_feats = self.arena.shape[0]
        perm = np.arange(n_feats)
        for j in range(self.f_try):
            r = j + self.rng.bounded(n_feats - j)
            perm[j], perm[r] = perm[r], perm[j]

        best_score = -np.inf
        best_f = -1
        best_thr = 0.0
        best_nl = 0
        best_csl = 0.0
        best_cw = 0
        for j in range(self.f_try):
            f = int(perm[j])
            seg = self.arena[f, lo:hi]
            vals = self.XT[f, seg]
            wseg = self.w[seg]
            cs = np.cumsum(wseg * self.y[seg])
            cw = np.cumsum(wseg)
            cwl = cw[:-1]
            cwr = node_w - cwl
            valid = (vals[:-1] < vals[1:]) & (cwl >= self.msl) & (cwr >= self.msl)
            if not valid.any():
                continue
            csl = cs[:-1]
            csr = node_sum - csl
            cwlf = cwl.astype(np.float64)
            cwrf = cwr.astype(np.float64)
            score = np.where(valid, csl * csl / cwlf + csr * csr / cwrf, -np.inf)
            p = int(np.argmax(score))
            if score[p] > best_score:
                best_score = score[p]
                best_f = f
                thr = (vals[p] + vals[p + 1]) * 0.5
                if thr >= vals[p + 1]:  # midpoint rounded up between adjacent floats
                    thr = vals[p]
                best_thr = thr
                best_nl = p + 1
                best_csl = float(cs[p])
                best_cw = int(cw[p])

        if best_f < 0:
            self.value[nid] = node_sum / node_w
            return nid

        # rows left of the chosen position go left; the best feature's segment
        # is already partitioned by construction
        left_rows = self.arena[best_f, lo : lo + best_nl]
        self.row_mask[left_rows] = True
        for f in range(n_feats):
            if f == best_f:
                continue
            seg = self.arena[f, lo:hi]
            go_left = self.row_mask[seg]
            self.arena[f, lo:hi] = np.concatenate((seg[go_left], seg[~go_left]))
        self.row_mask[left_rows] = False

        self.feature[nid] = best_f
        self.threshold[nid] = best_thr
        self.left[nid] = self.build(lo, lo + best_nl, depth + 1, best_csl, best_cw)
        self.right[nid] = self.build(
            lo + best_nl, hi, depth + 1, node_sum - best_csl, node_w - best_cw
        )
        return nid


def fit_forest(XT, y, sorted_cols, n_trees, max_depth, min_samples_leaf, max_features, bootstrap, seed):
    """Grow `n_trees` CART regression trees on feature-major inputs.

    `XT` is the transposed (n_feats, m) training matrix and `sorted_cols[:, f]`
    the stable argsort of feature f. Returns flat per-tree node arrays
    (feature, threshold, left, right, value, n_nodes); feature == -1 marks a leaf.
    """
    n_feats, m = XT.shape
    cap = 2 * m + 1
    features = np.full((n_trees, cap), -1, dtype=np.int32)
    thresholds = np.zeros((n_trees, cap))
    lefts = np.full((n_trees, cap), -1, dtype=np.int32)
    rights = np.full((n_trees, cap), -1, dtype=np.int32)
    values = np.zeros((n_trees, cap))
    n_nodes = np.zeros(n_trees, dtype=np.int32)

    arena = np.empty((n_feats, m), dtype=np.int32)
    for t in range(n_trees):
        rng = _SplitMix((seed + (t + 1) * _GOLDEN) & _MASK)
        if bootstrap:
            w = np.zeros(m, dtype=np.int32)
            for _ in range(m):
                w[rng.bounded(m)] += 1
        else:
            w = np.ones(m, dtype=np.int32)
        in_bag = w > 0
        m_u = int(np.count_nonzero(in_bag))
        for f in range(n_feats):
            order = sorted_cols[:, f]
            arena[f, :m_u] = order[in_bag[order]]

        builder = _TreeBuilder(
            XT, y, w, arena[:, :m_u], min_samples_leaf, max_features, max_depth, rng
        )
        seg0 = arena[0, :m_u]
        root_sum = float(np.cumsum(w[seg0] * y[seg0])[-1])
        builder.build(0, m_u, 0, root_sum, m)
        k = builder.n_nodes
        features[t, :k] = builder.feature[:k]
        thresholds[t, :k] = builder.threshold[:k]
        lefts[t, :k] = builder.left[:k]
        rights[t, :k] = builder.right[:k]
        values[t, :k] = builder.value[:k]
        n_nodes[t] = k
    return features, thresholds, lefts, rights, values, n_nodes


def _tree_predict(feature, threshold, left, right, value, X):
    node = np.zeros(X.shape[0], dtype=np.int32)
    while True:
        f = feature[node]
        active = f >= 0
        if not active.any():
            return value[node]
        idx = np.flatnonzero(active)
        cur = node[idx]
        go_left = X[idx, f[idx]] <= threshold[cur]
        node[idx] = np.where(go_left, left[cur], right[cur])


def predict_forest(features, thresholds, lefts, rights, values, n_nodes, X):
    """Across-tree mean and (population) standard deviation per query point."""
    n_trees = features.shape[0]
    q = X.shape[0]
    acc = np.zeros(q)
    acc_sq = np.zeros(q)
    for t in range(n_trees):
        pred = _tree_predict(features[t], thresholds[t], lefts[t], rights[t], values[t], X)
        acc = acc + pred
        acc_sq = acc_sq + pred * pred
    mean = acc / n_trees
    var = acc_sq / n_trees - mean * mean
    return mean, np.sqrt(np.maximum(var, 0.0))
