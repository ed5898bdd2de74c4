"""One-vs-rest linear SVM trained by primal stochastic subgradient descent.

Each class ``c`` gets a separator ``w_c . x - b_c`` minimising::

    lam/2 * ||w_c||^2 + mean_i max(0, 1 - y_i (w_c . x_i - b_c))

with step size ``1 / (lam * t)`` at global step ``t``. All per-class
separators are updated in lockstep, visiting documents in one seed-determined
order per epoch.

The bias is not regularised. Rather than taking subgradient steps (whose
early ``1/(lam t)`` jumps are never forgotten, unlike those on ``w``, which
shrink by ``1 - 1/t`` every step), it is set at the end of every epoch to the
exact minimiser of the hinge loss for the current ``w``.

Training runs on rows divided by their root-mean-square L2 norm ``r``, so
``lam`` is relative to unit-scale rows: TF rows (norm ~0.1) and binary rows
(norm ~10) would otherwise need regularisation 10^4 apart. Stored weights are
mapped back (``w = w' / r``) so predictions use the raw matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..features import DocTermMatrix
from .base import as_row, check_matrix, frozen


@dataclass(frozen=True)
class LinearSvmModel:
    weights: np.ndarray  # (k, n_terms)
    bias: np.ndarray  # (k,)
    lam: float
    epochs: int
    seed: int
    objective_history: np.ndarray  # (epochs, k), objective at each epoch end, scaled rows
    row_scale: float = 1.0

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    def decision_matrix(self, X) -> np.ndarray:
        return np.asarray(X @ self.weights.T) - self.bias

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_matrix(X), axis=1)


def hinge_objective(weights, bias, X, signs, lam) -> np.ndarray:
    """Per-class regularised hinge objective; ``signs`` is the (n, k) +/-1 target."""
    margins = np.asarray(X @ weights.T) - bias
    hinge = np.maximum(0.0, 1.0 - signs * margins).mean(axis=0)
    return 0.5 * lam * np.einsum("ij,ij->i", weights, weights) + hinge


def row_scale(X) -> float:
    """Root-mean-square L2 norm of the rows of ``X`` (1.0 for an all-zero matrix)."""
    sq = float(X.multiply(X).sum()) / max(X.shape[0], 1)
    return float(np.sqrt(sq)) if sq > 0 else 1.0


def best_bias(scores: np.ndarray, signs: np.ndarray) -> float:
    """``argmin_b sum_i max(0, 1 - y_i (s_i - b))``.

    The loss is convex and piecewise linear with kinks at ``s_i - 1``
    (positives) and ``s_i + 1`` (negatives); all kinks are evaluated with
    prefix sums and the midpoint of the minimising ones is returned.
    """
    P = np.sort(scores[signs > 0] - 1.0)
    Q = np.sort(scores[signs < 0] + 1.0)
    cand = np.concatenate([P, Q])
    sumP = np.concatenate([[0.0], np.cumsum(P)])
    sumQ = np.concatenate([[0.0], np.cumsum(Q)])
    nP = np.searchsorted(P, cand, side="left")  # positives with b > s_i - 1
    nQ = np.searchsorted(Q, cand, side="right")  # negatives with b >= s_i + 1
    loss = (cand * nP - sumP[nP]) + (sumQ[-1] - sumQ[nQ]) - cand * (Q.size - nQ)
    lowest = loss.min()
    on = cand[loss <= lowest + 1e-12 * max(1.0, abs(lowest))]
    return float((on.min() + on.max()) / 2.0)


def svm_train(matrix: DocTermMatrix, lam: float = 1e-2, epochs: int = 20, seed: int = 0) -> LinearSvmModel:
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    check_matrix(matrix)
    r = row_scale(matrix.X)
    X = (matrix.X / r).tocsr()
    n, k = matrix.n_docs, matrix.n_classes
    signs = np.where(matrix.labels[:, None] == np.arange(k)[None, :], 1.0, -1.0)
    W = np.zeros((k, matrix.n_terms))
    b = np.zeros(k)
    rng = np.random.default_rng(seed)
    history = []
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            lo, hi = X.indptr[i], X.indptr[i + 1]
            cols, vals = X.indices[lo:hi], X.data[lo:hi]
            y = signs[i]
            violated = y * (W[:, cols] @ vals - b) < 1.0
            W *= 1.0 - eta * lam
            if violated.any():
                rows = np.flatnonzero(violated)
                W[np.ix_(rows, cols)] += eta * y[rows, None] * vals[None, :]
        scores = np.asarray(X @ W.T)
        b = np.array([best_bias(scores[:, c], signs[:, c]) for c in range(k)])
        history.append(hinge_objective(W, b, X, signs, lam))
    return LinearSvmModel(frozen(W / r), frozen(b), float(lam), int(epochs), int(seed), frozen(history), r)


def svm_predict(model: LinearSvmModel, row) -> tuple[int, np.ndarray]:
    """Class with the largest margin ``w_c . x - b_c`` (lowest index on ties)."""
    cols, vals = as_row(row)
    margins = model.weights[:, cols] @ vals - model.bias
    return int(np.argmax(margins)), margins
