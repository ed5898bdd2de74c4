"""Word/char n-gram tokenisation, vocabularies and weighted document-term matrices."""
from __future__ import annotations

import enum
import hashlib
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EmptyVocabulary, UnknownAuthor
from .ingest import Document

SUPPORTED_NGRAMS = (("word", 1), ("word", 2), ("char", 3), ("char", 4), ("char", 5))

_TOKEN_LABELS = {
    ("word", 1): "Unigram (Word)",
    ("word", 2): "Bigram (Word)",
    ("char", 3): "Char 3 Gram",
    ("char", 4): "Char 4 Gram",
    ("char", 5): "Char 5 Gram",
}


@dataclass(frozen=True, order=True)
class NGramSpec:
    unit: str
    n: int

    def __post_init__(self):
        if (self.unit, self.n) not in SUPPORTED_NGRAMS:
            raise ValueError(f"unsupported n-gram spec ({self.unit}, {self.n})")

    @classmethod
    def parse(cls, name: str) -> "NGramSpec":
        """``"word1"`` / ``"char3"`` style names."""
        unit, n = name.rstrip("0123456789"), name[len(name.rstrip("0123456789")):]
        if not n:
            raise ValueError(f"bad n-gram name {name!r}")
        return cls(unit, int(n))

    @property
    def name(self) -> str:
        return f"{self.unit}{self.n}"

    @property
    def label(self) -> str:
        return _TOKEN_LABELS[(self.unit, self.n)]


ALL_NGRAMS = tuple(NGramSpec(u, n) for u, n in SUPPORTED_NGRAMS)


class WeightScheme(enum.Enum):
    TF = "TF"
    TFIDF = "TFIDF"
    BINARY = "Binary"

    @classmethod
    def parse(cls, name: str) -> "WeightScheme":
        key = name.strip().upper().replace("-", "").replace("_", "")
        for scheme in cls:
            if scheme.value.upper() == key or scheme.name == key:
                return scheme
        if key in ("BIN", "WEIGHTBIN"):
            return cls.BINARY
        raise ValueError(f"unknown weight scheme {name!r}")

    @property
    def label(self) -> str:
        return {"TF": "TF", "TFIDF": "TF-IDF", "Binary": "Weight Bin"}[self.value]


def normalize_text(text: str, keep_case: bool = False) -> str:
    text = unicodedata.normalize("NFC", text)
    if not keep_case:
        # lower() can denormalise (e.g. dotted capital I), so re-compose
        text = unicodedata.normalize("NFC", text.lower())
    return " ".join(text.split())


def word_ngrams(text: str, n: int) -> list[str]:
    tokens = text.split()
    if n == 1:
        return tokens
    return [" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def char_ngrams(text: str, n: int) -> list[str]:
    return [text[i:i + n] for i in range(len(text) - n + 1)]


def extract(text: str, spec: NGramSpec, keep_case: bool = False) -> list[str]:
    """Normalise ``text`` and cut it into n-grams per ``spec``."""
    norm = normalize_text(text, keep_case)
    if spec.unit == "word":
        return word_ngrams(norm, spec.n)
    return char_ngrams(norm, spec.n)


@dataclass(frozen=True)
class Vocabulary:
    spec: NGramSpec
    terms: tuple[str, ...]
    doc_freq: np.ndarray
    n_train_docs: int
    keep_case: bool = False
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {t: j for j, t in enumerate(self.terms)})
        df = np.asarray(self.doc_freq, dtype=np.int64)
        df.setflags(write=False)
        object.__setattr__(self, "doc_freq", df)

    def __len__(self):
        return len(self.terms)

    def idf(self) -> np.ndarray:
        return np.log(self.n_train_docs / self.doc_freq.astype(float))

    def to_text(self) -> str:
        header = f"{self.spec.unit} {self.spec.n} {self.n_train_docs}"
        if self.keep_case:
            header += " keep_case"
        rows = [f"{t}\t{df}" for t, df in zip(self.terms, self.doc_freq.tolist())]
        return "\n".join([header, *rows]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Vocabulary":
        lines = text.split("\n")
        head = lines[0].split()
        if len(head) not in (3, 4):
            raise ValueError("vocabulary header must be 'unit n n_train_docs'")
        spec = NGramSpec(head[0], int(head[1]))
        terms, dfs = [], []
        for line in lines[1:]:
            if not line:
                continue
            term, _, df = line.rpartition("\t")
            terms.append(term)
            dfs.append(int(df))
        return cls(spec, tuple(terms), np.array(dfs, dtype=np.int64), int(head[2]),
                   keep_case=len(head) == 4 and head[3] == "keep_case")

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()


def build_vocabulary(train_docs: Sequence[Document], spec: NGramSpec, min_df: int = 1,
                     keep_case: bool = False) -> Vocabulary:
    if not train_docs:
        raise ValueError("need at least one training document")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter = Counter()
    for doc in train_docs:
        df.update(set(extract(doc.text, spec, keep_case)))
    terms = sorted(t for t, c in df.items() if c >= min_df)
    if not terms:
        raise EmptyVocabulary(f"no {spec.name} term occurs in >= {min_df} training documents")
    return Vocabulary(spec, tuple(terms), np.array([df[t] for t in terms]), len(train_docs), keep_case)


@dataclass(frozen=True)
class DocTermMatrix:
    """CSR documents x terms matrix plus per-row class labels."""

    X: sp.csr_matrix
    labels: np.ndarray
    scheme: WeightScheme
    n_classes: int

    @property
    def n_docs(self) -> int:
        return self.X.shape[0]

    @property
    def n_terms(self) -> int:
        return self.X.shape[1]

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.X.indptr[i], self.X.indptr[i + 1]
        return self.X.indices[lo:hi], self.X.data[lo:hi]

    def to_coordinate_text(self) -> str:
        coo = self.X.tocoo()
        out = [f"{self.n_docs} {self.n_terms} {self.scheme.value}"]
        # CSR -> COO keeps (row, col) order since indices are sorted
        out.extend(f"{r} {c} {w:.9g}" for r, c, w in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
        return "\n".join(out) + "\n"


def read_coordinate_text(text: str) -> tuple[sp.csr_matrix, WeightScheme]:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    n_docs, n_terms, scheme = lines[0].split()
    rows, cols, vals = [], [], []
    for ln in lines[1:]:
        r, c, w = ln.split()
        rows.append(int(r))
        cols.append(int(c))
        vals.append(float(w))
    X = sp.csr_matrix((vals, (rows, cols)), shape=(int(n_docs), int(n_terms)))
    return X, WeightScheme(scheme)


def count_matrix(docs: Sequence[Document], vocab: Vocabulary) -> sp.csr_matrix:
    """Raw in-vocabulary n-gram counts, one row per document."""
    indptr, indices, data = [0], [], []
    for doc in docs:
        counts = Counter(vocab.index[g] for g in extract(doc.text, vocab.spec, vocab.keep_case)
                         if g in vocab.index)
        cols = sorted(counts)
        indices.extend(cols)
        data.extend(counts[c] for c in cols)
        indptr.append(len(indices))
    return sp.csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=np.int64), indptr),
                         shape=(len(docs), len(vocab)))


def apply_weighting(counts: sp.csr_matrix, vocab: Vocabulary, scheme: WeightScheme) -> sp.csr_matrix:
    X = counts.copy().astype(float)
    if scheme is WeightScheme.BINARY:
        X.data[:] = 1.0
        return X
    totals = np.asarray(X.sum(axis=1)).ravel()
    row_of = np.repeat(np.arange(X.shape[0]), np.diff(X.indptr))
    X.data = X.data / totals[row_of]
    if scheme is WeightScheme.TFIDF:
        X.data = X.data * vocab.idf()[X.indices]
        X.eliminate_zeros()
    return X


def vectorize(docs: Sequence[Document], vocab: Vocabulary, scheme: WeightScheme,
              class_index: Mapping[str, int]) -> DocTermMatrix:
    labels = []
    for doc in docs:
        if doc.author not in class_index:
            raise UnknownAuthor(doc.author)
        labels.append(class_index[doc.author])
    X = apply_weighting(count_matrix(docs, vocab), vocab, scheme)
    k = max(class_index.values()) + 1 if class_index else 0
    return DocTermMatrix(X, np.array(labels, dtype=np.int64), scheme, k)


def top_distinctive_terms(matrix: DocTermMatrix, vocab: Vocabulary, k: int) -> list[list[tuple[str, float]]]:
    """Per class, the ``k`` terms whose mean weight most exceeds the out-of-class mean."""
    if k < 1:
        raise ValueError("k must be >= 1")
    X = matrix.X
    out = []
    for c in range(matrix.n_classes):
        inside = matrix.labels == c
        n_in, n_out = int(inside.sum()), int((~inside).sum())
        mean_in = np.asarray(X[inside].sum(axis=0)).ravel() / n_in if n_in else np.zeros(X.shape[1])
        mean_out = np.asarray(X[~inside].sum(axis=0)).ravel() / n_out if n_out else np.zeros(X.shape[1])
        score = mean_in - mean_out
        ranked = sorted(range(len(vocab)), key=lambda j: (-score[j], vocab.terms[j]))[:k]
        out.append([(vocab.terms[j], float(score[j])) for j in ranked])
    return out
