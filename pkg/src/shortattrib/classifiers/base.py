"""Helpers shared by the four classifiers."""
from __future__ import annotations

from typing import Mapping

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateMatrix
from ..features import DocTermMatrix


def check_matrix(matrix: DocTermMatrix) -> None:
    if matrix.n_terms == 0:
        raise DegenerateMatrix("matrix has no terms")
    if matrix.n_docs == 0:
        raise DegenerateMatrix("matrix has no documents")
    present = np.bincount(matrix.labels, minlength=matrix.n_classes)
    empty = np.flatnonzero(present == 0)
    if empty.size:
        raise DegenerateMatrix(f"classes without training documents: {empty.tolist()}")


def as_row(row) -> tuple[np.ndarray, np.ndarray]:
    """Coerce a sparse row to ``(column ids, weights)``.

    Accepts a ``{col: weight}`` mapping, a ``(cols, weights)`` pair, a list of
    ``(col, weight)`` pairs, or a 1 x n scipy sparse matrix.
    """
    if sp.issparse(row):
        r = sp.csr_matrix(row)
        return r.indices.astype(np.int64), r.data.astype(float)
    if isinstance(row, Mapping):
        cols = np.fromiter(row.keys(), dtype=np.int64, count=len(row))
        vals = np.fromiter(row.values(), dtype=float, count=len(row))
        return cols, vals
    if isinstance(row, tuple) and len(row) == 2 and not np.isscalar(row[0]):
        return np.asarray(row[0], dtype=np.int64), np.asarray(row[1], dtype=float)
    pairs = list(row)
    if not pairs:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    cols, vals = zip(*pairs)
    return np.asarray(cols, dtype=np.int64), np.asarray(vals, dtype=float)


def frozen(a) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a
