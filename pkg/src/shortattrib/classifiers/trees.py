"""Binary classification trees: fully grown CART and a significance-gated tree.

Both trees split a node on ``x[feature] <= threshold`` (absent entries are 0)
and choose thresholds by Gini gain. They differ in when they stop:

* :func:`grow_cart` keeps splitting until a node is pure, has fewer than two
  documents, or no candidate split has positive gain.
* :func:`ctree_train` scores each feature's best Gini split with a Pearson
  chi-square test on the resulting 2 x k table and only splits when the
  Bonferroni-adjusted p-value of the most significant feature clears
  ``alpha_sig``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaincc

from ..features import DocTermMatrix
from .base import as_row, check_matrix

# split scores are compared after rounding so that rationally equal gains tie
_SCORE_DECIMALS = 9
_BLOCK_CELLS = 4_000_000


@dataclass(frozen=True)
class Leaf:
    label: int
    class_counts: tuple[int, ...]


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


def make_leaf(counts: np.ndarray) -> Leaf:
    return Leaf(int(np.argmax(counts)), tuple(int(c) for c in counts))


@dataclass(frozen=True)
class NodeSplits:
    """Best Gini split of every candidate feature at one node."""

    features: np.ndarray  # candidate column ids, ascending
    valid: np.ndarray  # feature has at least two distinct values in the node
    score: np.ndarray  # rounded sum_c L_c^2/n_L + sum_c R_c^2/n_R at the best threshold
    threshold: np.ndarray
    left_counts: np.ndarray  # (n_features, k)


def _best_splits_dense(values: np.ndarray, y: np.ndarray, k: int):
    """Vectorised Gini threshold search over the columns of ``values`` (n x f)."""
    n, f = values.shape
    order = np.argsort(values, axis=0, kind="stable")
    xs = np.take_along_axis(values, order, axis=0)
    onehot = y[order][..., None] == np.arange(k)
    left = np.cumsum(onehot, axis=0, dtype=np.int64)[:-1]  # (n-1, f, k)
    total = np.bincount(y, minlength=k)
    right = total - left
    n_left = np.arange(1, n, dtype=float)[:, None]
    score = (left ** 2).sum(-1) / n_left + (right ** 2).sum(-1) / (n - n_left)
    score = np.round(score, _SCORE_DECIMALS)
    boundary = xs[:-1] < xs[1:]
    score = np.where(boundary, score, -np.inf)
    best = np.argmax(score, axis=0)  # first max -> lowest threshold
    cols = np.arange(f)
    lo, hi = xs[best, cols], xs[best + 1, cols]
    mid = lo + (hi - lo) / 2.0
    threshold = np.where(mid < hi, mid, lo)
    return boundary.any(axis=0), score[best, cols], threshold, left[best, cols]


def best_splits(X: sp.csr_matrix, rows: np.ndarray, y: np.ndarray, k: int,
                features: np.ndarray | None = None) -> NodeSplits:
    """Best threshold per feature for the node holding ``rows`` (may repeat).

    ``features`` restricts the candidates; columns that are all zero in the
    node cannot split it and are reported as invalid without a dense pass.
    """
    sub = X[rows]
    if features is None:
        features = np.arange(X.shape[1])
    features = np.asarray(features, dtype=np.int64)
    m = features.size
    valid = np.zeros(m, dtype=bool)
    score = np.full(m, -np.inf)
    threshold = np.zeros(m)
    left_counts = np.zeros((m, k), dtype=np.int64)
    if m == 0 or len(rows) < 2:
        return NodeSplits(features, valid, score, threshold, left_counts)

    present = np.zeros(X.shape[1], dtype=bool)
    present[sub.indices] = True
    live = np.flatnonzero(present[features])
    sub = sub.tocsc()
    block = max(1, _BLOCK_CELLS // (len(rows) * k))
    for start in range(0, live.size, block):
        pos = live[start:start + block]
        dense = sub[:, features[pos]].toarray()
        v, s, t, lc = _best_splits_dense(dense, y, k)
        valid[pos], score[pos], threshold[pos], left_counts[pos] = v, s, t, lc
    return NodeSplits(features, valid, score, threshold, left_counts)


def _parent_score(counts: np.ndarray) -> float:
    n = counts.sum()
    return round(float((counts ** 2).sum() / n), _SCORE_DECIMALS)


def _partition(X: sp.csr_matrix, rows: np.ndarray, feature: int, threshold: float):
    col = X[rows][:, [feature]].toarray().ravel()
    go_left = col <= threshold
    return rows[go_left], rows[~go_left]


def grow_cart(X: sp.csr_matrix, labels: np.ndarray, n_classes: int, rows: np.ndarray | None = None,
              m_try: int | None = None, rng: np.random.Generator | None = None) -> TreeNode:
    """Grow an unpruned Gini tree.

    With ``m_try`` set, each node draws that many candidate features without
    replacement from ``rng``; otherwise every feature is a candidate.
    """
    X = sp.csr_matrix(X)
    labels = np.asarray(labels, dtype=np.int64)
    rows = np.arange(X.shape[0]) if rows is None else np.asarray(rows, dtype=np.int64)
    n_terms = X.shape[1]

    def grow(node_rows: np.ndarray) -> TreeNode:
        y = labels[node_rows]
        counts = np.bincount(y, minlength=n_classes)
        if len(node_rows) < 2 or np.count_nonzero(counts) <= 1:
            return make_leaf(counts)
        if m_try is None:
            feats = None
        else:
            feats = np.sort(rng.choice(n_terms, size=m_try, replace=False))
        cand = best_splits(X, node_rows, y, n_classes, feats)
        if not cand.valid.any():
            return make_leaf(counts)
        j = int(np.argmax(cand.score))
        if not cand.score[j] > _parent_score(counts):
            return make_leaf(counts)
        feature, thr = int(cand.features[j]), float(cand.threshold[j])
        left, right = _partition(X, node_rows, feature, thr)
        return Split(feature, thr, grow(left), grow(right))

    return grow(rows)


def chi2_sf(stat: np.ndarray, df: np.ndarray) -> np.ndarray:
    """Upper tail of the chi-square distribution via the regularised gamma Q."""
    return gammaincc(np.asarray(df, dtype=float) / 2.0, np.asarray(stat, dtype=float) / 2.0)


def split_pvalues(left_counts: np.ndarray, node_counts: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Pearson chi-square p-value of each feature's 2 x k split table.

    Empty class columns are dropped from the table; invalid splits get p = 1.
    """
    left = left_counts.astype(float)
    right = node_counts[None, :] - left
    n = float(node_counts.sum())
    n_left = left.sum(axis=1, keepdims=True)
    n_right = n - n_left
    col = node_counts[None, :].astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        e_left = n_left * col / n
        e_right = n_right * col / n
        terms = np.where(col > 0, (left - e_left) ** 2 / e_left + (right - e_right) ** 2 / e_right, 0.0)
    stat = terms.sum(axis=1)
    df = np.count_nonzero(node_counts) - 1
    p = chi2_sf(stat, np.full(stat.shape, max(df, 1)))
    ok = valid & (n_left.ravel() > 0) & (n_right.ravel() > 0) & (df >= 1)
    return np.where(ok, p, 1.0)


@dataclass(frozen=True)
class ConditionalTreeModel:
    root: TreeNode
    alpha_sig: float
    min_node: int
    n_classes: int

    def predict(self, X) -> np.ndarray:
        return predict_tree(self.root, X)


def ctree_train(matrix: DocTermMatrix, alpha_sig: float = 0.05, min_node: int = 7) -> ConditionalTreeModel:
    if not 0 < alpha_sig < 1:
        raise ValueError("alpha_sig must lie in (0, 1)")
    if min_node < 1:
        raise ValueError("min_node must be >= 1")
    check_matrix(matrix)
    X, labels, k = matrix.X, matrix.labels, matrix.n_classes
    n_features = matrix.n_terms

    def grow(rows: np.ndarray) -> TreeNode:
        y = labels[rows]
        counts = np.bincount(y, minlength=k)
        if len(rows) < min_node or np.count_nonzero(counts) <= 1:
            return make_leaf(counts)
        cand = best_splits(X, rows, y, k)
        p = split_pvalues(cand.left_counts, counts, cand.valid)
        # most significant first; stronger Gini split, then lower column id, on ties
        j = int(np.lexsort((cand.features, -cand.score, p))[0])
        if min(1.0, p[j] * n_features) > alpha_sig:
            return make_leaf(counts)
        feature, thr = int(cand.features[j]), float(cand.threshold[j])
        left, right = _partition(X, rows, feature, thr)
        return Split(feature, thr, grow(left), grow(right))

    return ConditionalTreeModel(grow(np.arange(matrix.n_docs)), float(alpha_sig), int(min_node), k)


def tree_predict(root: TreeNode, row) -> int:
    cols, vals = as_row(row)
    lookup = dict(zip(cols.tolist(), vals.tolist()))
    node = root
    while isinstance(node, Split):
        node = node.left if lookup.get(node.feature, 0.0) <= node.threshold else node.right
    return node.label


def predict_tree(root: TreeNode, X) -> np.ndarray:
    """:func:`tree_predict` for every row of a sparse matrix."""
    X = sp.csc_matrix(X)
    out = np.zeros(X.shape[0], dtype=np.int64)
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if not rows.size:
            continue
        if isinstance(node, Leaf):
            out[rows] = node.label
            continue
        col = X[:, node.feature].toarray().ravel()[rows]
        go_left = col <= node.threshold
        stack.append((node.left, rows[go_left]))
        stack.append((node.right, rows[~go_left]))
    return out


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def count_leaves(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 1
    return count_leaves(node.left) + count_leaves(node.right)
