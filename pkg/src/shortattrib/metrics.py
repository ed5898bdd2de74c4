"""Confusion matrices and macro-averaged accuracy / TPR / precision."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyEvaluation, LabelOutOfRange, LengthMismatch


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray  # counts[true, pred]

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    tpr: float
    precision: float
    per_class_recall: tuple[float, ...]
    per_class_precision: tuple[float, ...]
    n_docs: int

    def formatted(self) -> tuple[str, str, str]:
        return fmt(self.accuracy), fmt(self.tpr), fmt(self.precision)


def fmt(value: float) -> str:
    return f"{value:.3f}"


def confusion(true_labels: Sequence[int], pred_labels: Sequence[int], k: int) -> ConfusionMatrix:
    t = np.asarray(true_labels, dtype=np.int64)
    p = np.asarray(pred_labels, dtype=np.int64)
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.size} true labels vs {p.size} predictions")
    if t.size == 0:
        raise EmptyEvaluation("nothing to evaluate")
    for name, arr in (("true", t), ("predicted", p)):
        if arr.min() < 0 or arr.max() >= k:
            raise LabelOutOfRange(f"{name} label outside [0, {k})")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts)


def report(cm: ConfusionMatrix) -> EvalReport:
    c = cm.counts
    if c.sum() < 1:
        raise EmptyEvaluation("confusion matrix is empty")
    diag = np.diag(c).astype(float)
    rows, cols = c.sum(axis=1), c.sum(axis=0)
    # 0/0 counts as 0 for both recall and precision
    recall = np.divide(diag, rows, out=np.zeros_like(diag), where=rows > 0)
    precision = np.divide(diag, cols, out=np.zeros_like(diag), where=cols > 0)
    return EvalReport(
        accuracy=100.0 * diag.sum() / c.sum(),
        tpr=100.0 * recall.mean(),
        precision=100.0 * precision.mean(),
        per_class_recall=tuple(recall.tolist()),
        per_class_precision=tuple(precision.tolist()),
        n_docs=int(c.sum()),
    )


def evaluate(true_labels, pred_labels, k: int) -> EvalReport:
    return report(confusion(true_labels, pred_labels, k))
