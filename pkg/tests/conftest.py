import numpy as np
import pytest
import scipy.sparse as sp

from shortattrib import synthgen
from shortattrib.features import DocTermMatrix, WeightScheme


def make_matrix(rows, labels, k=None, scheme=WeightScheme.BINARY) -> DocTermMatrix:
    X = sp.csr_matrix(np.asarray(rows, dtype=float))
    X.eliminate_zeros()
    labels = np.asarray(labels, dtype=np.int64)
    return DocTermMatrix(X, labels, scheme, int(k if k is not None else labels.max() + 1))


def random_count_matrix(rng, max_docs=30, max_terms=15, k=None, max_value=3):
    n = int(rng.integers(4, max_docs + 1))
    t = int(rng.integers(2, max_terms + 1))
    k = k or int(rng.integers(2, 4))
    rows = rng.integers(0, max_value + 1, size=(n, t)) * (rng.random((n, t)) < 0.5)
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
    rng.shuffle(labels)
    return rows, labels, k


def disjoint_profiles(n_authors=2):
    """Authors whose vocabularies share no word at all."""
    return [synthgen.AuthorProfile(f"a{i}", {f"w{i}x{j}": 0.25 for j in range(4)}) for i in range(n_authors)]


@pytest.fixture(scope="session")
def default_corpus():
    return synthgen.generate(synthgen.default_profiles(), seed=7)
