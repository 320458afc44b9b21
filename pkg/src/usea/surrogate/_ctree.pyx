# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled regression-forest kernel.

Mirrors the pure backend draw for draw (same splitmix64 stream, same shared
stable presort filtered to in-bag rows, same sequential accumulations), so both
backends grow bit-identical forests. The bootstrap is held as per-row integer
weights; node segments store each in-bag row once and all sample counts are
weighted.
"""

import numpy as np

from libc.math cimport sqrt

NAME = "compiled"

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 MIX2 = 0x94D049BB133111EBULL

cdef double NEG_INF = float("-inf")


cdef class _TreeBuilder:
    cdef double[:, ::1] XT  # feature-major (n_feats, m) for cache-friendly column scans
    cdef double[::1] y
    cdef int[::1] w
    cdef int[:, ::1] arena
    cdef int[::1] tmp
    cdef unsigned char[::1] row_mask
    cdef int[::1] perm
    cdef int[::1] feature
    cdef double[::1] threshold
    cdef int[::1] left
    cdef int[::1] right
    cdef double[::1] value
    cdef int n_nodes
    cdef int n_feats, msl, f_try, max_depth
    cdef int stride  # columns of XT/arena (= m)
    cdef u64 state

    cdef u64 _next(self):
        self.state += GOLDEN
        cdef u64 z = self.state
        z = (z ^ (z >> 30)) * MIX1
        z = (z ^ (z >> 27)) * MIX2
        return z ^ (z >> 31)

    cdef int build(self, int lo, int hi, int depth, double node_sum, int node_w):
        # preorder build of the unique-row segment [lo, hi); weighted target sum
        # and weight total are threaded from the parent split
        cdef int nid = self.n_nodes
        self.n_nodes += 1
        cdef int s = hi - lo
        cdef int j, p, f, r, row, wr, cw, pos_l, pos_r, swap
        cdef double y0, vcur, vnext, csl, csr, score, thr, cs

        cdef double* yp = &self.y[0]
        cdef int* wp = &self.w[0]
        cdef double* xbase = &self.XT[0, 0]
        cdef int* abase = &self.arena[0, 0]
        cdef int* af
        cdef double* xf
        cdef int* tmp = &self.tmp[0]
        cdef unsigned char* mask = &self.row_mask[0]
        cdef int* pp = &self.perm[0]
        cdef int msl = self.msl
        cdef int stride = self.stride

        if node_w < 2 * msl or (self.max_depth >= 0 and depth >= self.max_depth):
            self.value[nid] = node_sum / node_w
            return nid
        y0 = yp[abase[lo]]
        for j in range(lo + 1, hi):
            if yp[abase[j]] != y0:
                break
        else:
            self.value[nid] = node_sum / node_w
            return nid

        for j in range(self.n_feats):
            pp[j] = j
        for j in range(self.f_try):
            r = j + <int>(self._next() % <u64>(self.n_feats - j))
            swap = pp[j]
            pp[j] = pp[r]
            pp[r] = swap

        cdef double best_score = NEG_INF
        cdef int best_f = -1
        cdef double best_thr = 0.0
        cdef int best_nl = 0
        cdef double best_csl = 0.0
        cdef int best_cw = 0
        for j in range(self.f_try):
            f = pp[j]
            af = abase + f * stride
            xf = xbase + f * stride
            cs = 0.0
            cw = 0
            vcur = xf[af[lo]]
            for p in range(s - 1):
                row = af[lo + p]
                wr = wp[row]
                cs += wr * yp[row]
                cw += wr
                vnext = xf[af[lo + p + 1]]
                if vcur < vnext and cw >= msl and node_w - cw >= msl:
                    csl = cs
                    csr = node_sum - csl
                    score = csl * csl / <double>cw + csr * csr / <double>(node_w - cw)
                    if score > best_score:
                        best_score = score
                        best_f = f
                        thr = (vcur + vnext) * 0.5
                        if thr >= vnext:  # midpoint rounded up between adjacent floats
                            thr = vcur
                        best_thr = thr
                        best_nl = p + 1
                        best_csl = csl
                        best_cw = cw
                vcur = vnext

        if best_f < 0:
            self.value[nid] = node_sum / node_w
            return nid

        # rows left of the chosen position go left; the best feature's segment
        # is already partitioned by construction
        af = abase + best_f * stride
        for p in range(lo, lo + best_nl):
            mask[af[p]] = 1
        for f in range(self.n_feats):
            if f == best_f:
                continue
            af = abase + f * stride
            pos_l = 0
            pos_r = best_nl
            for p in range(lo, hi):
                row = af[p]
                if mask[row]:
                    tmp[pos_l] = row
                    pos_l += 1
                else:
                    tmp[pos_r] = row
                    pos_r += 1
            for p in range(s):
                af[lo + p] = tmp[p]
        af = abase + best_f * stride
        for p in range(lo, lo + best_nl):
            mask[af[p]] = 0

        self.feature[nid] = best_f
        self.threshold[nid] = best_thr
        self.left[nid] = self.build(lo, lo + best_nl, depth + 1, best_csl, best_cw)
        self.right[nid] = self.build(
            lo + best_nl, hi, depth + 1, node_sum - best_csl, node_w - best_cw
        )
        return nid


def fit_forest(double[:, ::1] XT, double[::1] y, int[:, ::1] sorted_cols,
               int n_trees, int max_depth, int min_samples_leaf, int max_features,
               bint bootstrap, object seed):
    """Grow `n_trees` CART regression trees; see the pure backend for the contract."""
    cdef int m = XT.shape[1]
    cdef int n_feats = XT.shape[0]
    cdef int cap = 2 * m + 1
    features_np = np.full((n_trees, cap), -1, dtype=np.int32)
    thresholds_np = np.zeros((n_trees, cap))
    lefts_np = np.full((n_trees, cap), -1, dtype=np.int32)
    rights_np = np.full((n_trees, cap), -1, dtype=np.int32)
    values_np = np.zeros((n_trees, cap))
    n_nodes_np = np.zeros(n_trees, dtype=np.int32)
    cdef int[:, ::1] features = features_np
    cdef double[:, ::1] thresholds = thresholds_np
    cdef int[:, ::1] lefts = lefts_np
    cdef int[:, ::1] rights = rights_np
    cdef double[:, ::1] values = values_np
    cdef int[::1] n_nodes = n_nodes_np

    cdef u64 base_seed = <u64>(int(seed) & 0xFFFFFFFFFFFFFFFF)

    cdef _TreeBuilder b = _TreeBuilder()
    b.XT = XT
    b.y = y
    b.n_feats = n_feats
    b.msl = min_samples_leaf
    b.f_try = max_features
    b.max_depth = max_depth
    b.stride = m
    arena_np = np.empty((n_feats, m), dtype=np.int32)
    b.arena = arena_np
    b.tmp = np.empty(m, dtype=np.int32)
    b.row_mask = np.zeros(m, dtype=np.uint8)
    b.perm = np.empty(n_feats, dtype=np.int32)
    w_np = np.empty(m, dtype=np.int32)
    b.w = w_np

    cdef int* wptr = &b.w[0]
    cdef int* aptr = &b.arena[0, 0]
    cdef int* sptr = &sorted_cols[0, 0]
    cdef double* yptr = &y[0]
    cdef int t, f, q, pos, row, i, m_u
    cdef double root_sum

    for t in range(n_trees):
        b.state = base_seed + (<u64>(t + 1)) * GOLDEN
        if bootstrap:
            for i in range(m):
                wptr[i] = 0
            for i in range(m):
                wptr[<int>(b._next() % <u64>m)] += 1
        else:
            for i in range(m):
                wptr[i] = 1
        m_u = 0
        for f in range(n_feats):
            pos = f * m
            for q in range(m):
                row = sptr[q * n_feats + f]
                if wptr[row] > 0:
                    aptr[pos] = row
                    pos += 1
            m_u = pos - f * m

        b.feature = features[t]
        b.threshold = thresholds[t]
        b.left = lefts[t]
        b.right = rights[t]
        b.value = values[t]
        b.n_nodes = 0
        root_sum = 0.0
        for i in range(m_u):
            root_sum += wptr[aptr[i]] * yptr[aptr[i]]
        b.build(0, m_u, 0, root_sum, m)
        n_nodes[t] = b.n_nodes
    return features_np, thresholds_np, lefts_np, rights_np, values_np, n_nodes_np


def predict_forest(int[:, ::1] features, double[:, ::1] thresholds, int[:, ::1] lefts,
                   int[:, ::1] rights, double[:, ::1] values, int[::1] n_nodes,
                   double[:, ::1] X):
    """Across-tree mean and population standard deviation per query point."""
    cdef int n_trees = features.shape[0]
    cdef int q = X.shape[0]
    mean_np = np.zeros(q)
    std_np = np.zeros(q)
    cdef double[::1] acc = mean_np
    cdef double[::1] acc_sq = std_np
    cdef int t, i, node, f
    cdef double pred, mu, var
    cdef int* fp
    cdef int* lp
    cdef int* rp
    cdef double* tp
    cdef double* vp
    cdef double* xp

    for t in range(n_trees):
        fp = &features[t, 0]
        lp = &lefts[t, 0]
        rp = &rights[t, 0]
        tp = &thresholds[t, 0]
        vp = &values[t, 0]
        for i in range(q):
            xp = &X[i, 0]
            node = 0
            f = fp[node]
            while f >= 0:
                if xp[f] <= tp[node]:
                    node = lp[node]
                else:
                    node = rp[node]
                f = fp[node]
            pred = vp[node]
            acc[i] += pred
            acc_sq[i] += pred * pred
    for i in range(q):
        mu = acc[i] / n_trees
        var = acc_sq[i] / n_trees - mu * mu
        if var < 0.0:
            var = 0.0
        acc[i] = mu
        acc_sq[i] = sqrt(var)
    return mean_np, std_np
