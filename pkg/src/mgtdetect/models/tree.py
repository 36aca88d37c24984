"""CART decision trees (Gini impurity) over sparse column-major features.

Split search visits each candidate column's nonzeros only; the implicit
zeros form one block in the sorted order. Equal impurity decreases are
resolved toward the lowest column index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numba import njit

from .base import FeatureMatrix, TrainConfig, TrainedModel, check_trainable, sample_weights

_TIE_TOL = 1e-12


@njit(cache=True, nogil=True)
def _xorshift(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return (x * np.uint64(2685821657736338717)) >> np.uint64(11)


@njit(cache=True, nogil=True)
def _best_split(indptr, indices, data, m, pos, y, w, n_node, w0, w1, max_features, perm, rng_state,
                nz_val, nz_q, seq_val, seq_w0, seq_w1):
    """Return (feature, threshold, gain) of the best split, feature -1 if none."""
    W = w0 + w1
    parent = W - (w0 * w0 + w1 * w1) / W
    best_j = -1
    best_thr = 0.0
    best_gain = -np.inf
    visited_nonconst = 0
    for i in range(m):
        if max_features < m:
            if visited_nonconst >= max_features:
                break
            r = i + np.int64(_xorshift(rng_state) % np.uint64(m - i))
            tmp = perm[i]
            perm[i] = perm[r]
            perm[r] = tmp
            j = perm[i]
        else:
            j = i
        c = 0
        for p in range(indptr[j], indptr[j + 1]):
            q = pos[indices[p]]
            if q >= 0:
                nz_val[c] = data[p]
                nz_q[c] = q
                c += 1
        if c == 0:
            continue
        order = np.argsort(nz_val[:c], kind="mergesort")
        nzw0 = 0.0
        nzw1 = 0.0
        for k in range(c):
            row_w = w[nz_q[k]]
            if y[nz_q[k]] == 1:
                nzw1 += row_w
            else:
                nzw0 += row_w
        n_zero = n_node - c
        # merged sequence: negatives, zero block, positives
        s = 0
        zero_done = n_zero == 0
        for k in range(c):
            v = nz_val[order[k]]
            if not zero_done and v > 0:
                seq_val[s] = 0.0
                seq_w0[s] = w0 - nzw0
                seq_w1[s] = w1 - nzw1
                s += 1
                zero_done = True
            q = nz_q[order[k]]
            seq_val[s] = v
            if y[q] == 1:
                seq_w0[s] = 0.0
                seq_w1[s] = w[q]
            else:
                seq_w0[s] = w[q]
                seq_w1[s] = 0.0
            s += 1
        if not zero_done:
            seq_val[s] = 0.0
            seq_w0[s] = w0 - nzw0
            seq_w1[s] = w1 - nzw1
            s += 1
        if seq_val[0] == seq_val[s - 1]:
            continue
        visited_nonconst += 1
        lw0 = 0.0
        lw1 = 0.0
        for k in range(s - 1):
            lw0 += seq_w0[k]
            lw1 += seq_w1[k]
            if seq_val[k] == seq_val[k + 1]:
                continue
            L = lw0 + lw1
            rw0 = w0 - lw0
            rw1 = w1 - lw1
            R = rw0 + rw1
            if L <= 0 or R <= 0:
                continue
            gain = parent - (L - (lw0 * lw0 + lw1 * lw1) / L) - (R - (rw0 * rw0 + rw1 * rw1) / R)
            tol = _TIE_TOL * W
            if gain > best_gain + tol or (gain >= best_gain - tol and j < best_j):
                best_gain = gain
                best_j = j
                thr = 0.5 * (seq_val[k] + seq_val[k + 1])
                if thr >= seq_val[k + 1]:
                    thr = seq_val[k]
                best_thr = thr
    return best_j, best_thr, best_gain


@njit(cache=True, nogil=True)
def _build(indptr, indices, data, m, n_total, y, w, rows, max_features, max_depth, min_split, seed):
    n = rows.shape[0]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap)
    importances = np.zeros(m)
    pos = np.full(n_total, -1, dtype=np.int64)
    perm = np.arange(m)
    rng_state = np.array([seed], dtype=np.uint64)
    nz_val = np.empty(n)
    nz_q = np.empty(n, dtype=np.int64)
    seq_val = np.empty(n + 1)
    seq_w0 = np.empty(n + 1)
    seq_w1 = np.empty(n + 1)
    xs = np.empty(n)
    buf = np.empty(n, dtype=np.int64)
    rows = rows.copy()

    stack = np.empty((cap, 4), dtype=np.int64)  # node, start, end, depth
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        w0 = 0.0
        w1 = 0.0
        for k in range(start, end):
            if y[rows[k]] == 1:
                w1 += w[rows[k]]
            else:
                w0 += w[rows[k]]
        value[node] = w1 / (w0 + w1)
        if end - start < min_split or w0 == 0.0 or w1 == 0.0 or depth == max_depth:
            continue
        for k in range(start, end):
            pos[rows[k]] = k - start
        # pos is indexed by global row id; y and w are read through the node position
        ny = np.empty(end - start, dtype=np.int64)
        nw = np.empty(end - start)
        for k in range(start, end):
            ny[k - start] = y[rows[k]]
            nw[k - start] = w[rows[k]]
        j, thr, gain = _best_split(indptr, indices, data, m, pos, ny, nw, end - start, w0, w1,
                                   max_features, perm, rng_state, nz_val, nz_q, seq_val, seq_w0, seq_w1)
        if j >= 0:
            for k in range(end - start):
                xs[k] = 0.0
            for p in range(indptr[j], indptr[j + 1]):
                q = pos[indices[p]]
                if q >= 0:
                    xs[q] = data[p]
        for k in range(start, end):
            pos[rows[k]] = -1
        if j < 0:
            continue
        nl = 0
        for k in range(end - start):
            if xs[k] <= thr:
                buf[nl] = rows[start + k]
                nl += 1
        nr = nl
        for k in range(end - start):
            if xs[k] > thr:
                buf[nr] = rows[start + k]
                nr += 1
        for k in range(end - start):
            rows[start + k] = buf[k]
        feature[node] = j
        threshold[node] = thr
        importances[j] += gain
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        left[node] = lnode
        right[node] = rnode
        # push right first so the left subtree is numbered first
        stack[top, 0] = rnode
        stack[top, 1] = start + nl
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = lnode
        stack[top, 1] = start
        stack[top, 2] = start + nl
        stack[top, 3] = depth + 1
        top += 1
    return (feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes],
            importances)


@njit(cache=True, nogil=True)
def _apply(indptr, indices, data, feature, threshold, left, right, value):
    n = indptr.shape[0] - 1
    out = np.empty(n)
    for i in range(n):
        node = 0
        lo = indptr[i]
        hi = indptr[i + 1]
        while feature[node] >= 0:
            j = feature[node]
            p = lo + np.searchsorted(indices[lo:hi], j)
            x = data[p] if p < hi and indices[p] == j else 0.0
            node = left[node] if x <= threshold[node] else right[node]
        out[i] = value[node]
    return out


@dataclass(frozen=True)
class TreeArrays:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # weighted fraction of class 1 at each node
    importances: np.ndarray  # raw weighted impurity decrease per feature

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_values(self, X: sp.csr_matrix) -> np.ndarray:
        return _apply(X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data, self.feature,
                      self.threshold, self.left, self.right, self.value)

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in ("feature", "threshold", "left", "right", "value", "importances")}

    @classmethod
    def from_dict(cls, d: dict) -> "TreeArrays":
        ints = ("feature", "left", "right")
        return cls(**{k: np.array(v, dtype=np.int64 if k in ints else float) for k, v in d.items()})


def column_source(F: FeatureMatrix):
    X = sp.csc_matrix(F.X, dtype=float)
    X.eliminate_zeros()
    X.sort_indices()
    return X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data


def predict_csr(F: FeatureMatrix) -> sp.csr_matrix:
    X = F.csr().astype(float)
    X.sort_indices()
    return X


def grow_tree(cols, m: int, n_total: int, y: np.ndarray, w: np.ndarray, max_features: int,
              max_depth: int | None, min_split: int, seed: int) -> TreeArrays:
    rows = np.flatnonzero(w > 0).astype(np.int64)
    indptr, indices, data = cols
    out = _build(indptr, indices, data, m, n_total, y.astype(np.int64), w.astype(float), rows, max_features,
                 -1 if max_depth is None else max_depth, min_split, np.uint64(seed or 0x9E3779B97F4A7C15))
    return TreeArrays(*out)


def normalized(importances: np.ndarray) -> np.ndarray:
    total = importances.sum()
    return importances / total if total > 0 else np.zeros_like(importances)


@dataclass(frozen=True, eq=False)
class TreeModel(TrainedModel):
    tree: TreeArrays = field(default=None)

    def _proba(self, X: FeatureMatrix) -> np.ndarray:
        return self.tree.leaf_values(predict_csr(X))

    def importances(self) -> np.ndarray:
        return normalized(self.tree.importances)

    def params(self) -> dict:
        return {"tree": self.tree.to_dict()}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        return cls(kind, names, seed, TreeArrays.from_dict(p["tree"]))


def train_tree(F: FeatureMatrix, config: TrainConfig) -> TreeModel:
    check_trainable(F)
    w = sample_weights(F.y, config.class_weight)
    m = F.shape[1]
    tree = grow_tree(column_source(F), m, F.shape[0], F.y, w, m, config.max_depth, config.min_samples_split,
                     config.seed)
    return TreeModel("tree", F.names, config.seed, tree)
