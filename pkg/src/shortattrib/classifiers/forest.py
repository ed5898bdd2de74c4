"""Forest-RI: bagged unpruned Gini trees with per-node random feature subsets."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..features import DocTermMatrix
from .base import check_matrix
from .trees import TreeNode, grow_cart, predict_tree, tree_predict


@dataclass(frozen=True)
class RandomForestModel:
    trees: tuple[TreeNode, ...]
    m_try: int
    seed: int
    n_classes: int
    bootstrap: bool = True

    def votes(self, X) -> np.ndarray:
        """(n_docs, k) vote counts."""
        out = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            out[rows, predict_tree(tree, X)] += 1
        return out

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.votes(X), axis=1)


def default_mtry(n_terms: int) -> int:
    return max(1, math.isqrt(n_terms))


def tree_rng(seed: int, k: int) -> np.random.Generator:
    """Independent stream for tree ``k`` (1-based) of a forest seeded with ``seed``."""
    return np.random.default_rng([seed, k])


def rf_train(matrix: DocTermMatrix, ntree: int = 100, m_try: int | None = None, seed: int = 0,
             bootstrap: bool = True) -> RandomForestModel:
    check_matrix(matrix)
    if ntree < 1:
        raise ValueError("ntree must be >= 1")
    if m_try is None:
        m_try = default_mtry(matrix.n_terms)
    if not 1 <= m_try <= matrix.n_terms:
        raise ValueError(f"m_try must lie in [1, {matrix.n_terms}]")
    n = matrix.n_docs
    trees = []
    for k in range(1, ntree + 1):
        rng = tree_rng(seed, k)
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        trees.append(grow_cart(matrix.X, matrix.labels, matrix.n_classes, rows=rows, m_try=m_try, rng=rng))
    return RandomForestModel(tuple(trees), int(m_try), int(seed), matrix.n_classes, bootstrap)


def rf_predict(model: RandomForestModel, row) -> tuple[int, np.ndarray]:
    votes = np.zeros(model.n_classes, dtype=np.int64)
    for tree in model.trees:
        votes[tree_predict(tree, row)] += 1
    return int(np.argmax(votes)), votes
