"""Multinomial naive Bayes over real-valued term weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..features import DocTermMatrix
from .base import as_row, check_matrix, frozen


@dataclass(frozen=True)
class NaiveBayesModel:
    log_prior: np.ndarray  # (k,)
    log_likelihood: np.ndarray  # (k, n_terms)
    alpha: float

    @property
    def n_classes(self) -> int:
        return self.log_prior.shape[0]

    @property
    def n_terms(self) -> int:
        return self.log_likelihood.shape[1]

    def decision_matrix(self, X) -> np.ndarray:
        """Normalised log-posteriors for every row of a CSR matrix."""
        scores = np.asarray(X @ self.log_likelihood.T) + self.log_prior
        return scores - logsumexp(scores, axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_matrix(X), axis=1)


def nb_train(matrix: DocTermMatrix, alpha: float = 1.0) -> NaiveBayesModel:
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    check_matrix(matrix)
    k, n = matrix.n_classes, matrix.n_docs
    counts = np.bincount(matrix.labels, minlength=k)
    onehot = np.zeros((k, n))
    onehot[matrix.labels, np.arange(n)] = 1.0
    W = np.asarray((matrix.X.T @ onehot.T).T)  # (k, n_terms) summed weights per class
    smoothed = W + alpha
    log_lik = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    return NaiveBayesModel(frozen(np.log(counts / n)), frozen(log_lik), float(alpha))


def nb_predict(model: NaiveBayesModel, row) -> tuple[int, np.ndarray]:
    """Most probable class and the log-posterior vector (logsumexp = 0).

    Ties go to the lowest class index.
    """
    cols, vals = as_row(row)
    scores = model.log_prior + model.log_likelihood[:, cols] @ vals
    return int(np.argmax(scores)), scores - logsumexp(scores)
