"""Train/test splitting and the weight x token x classifier x test-set grid."""
from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .classifiers import ctree_train, default_mtry, nb_train, rf_train, svm_train
from .config import GridConfig
from .errors import AttributionError, TooFewDocuments
from .features import ALL_NGRAMS, NGramSpec, WeightScheme, build_vocabulary, vectorize
from .ingest import Corpus
from .metrics import EvalReport, evaluate, fmt

WEIGHTS = (WeightScheme.TF, WeightScheme.TFIDF, WeightScheme.BINARY)
CLASSIFIERS = ("NB", "SVM", "CTree", "RF")
CLASSIFIER_TITLES = {
    "NB": "Naive Bayes",
    "SVM": "Support Vector Machine",
    "CTree": "Conditional Tree",
    "RF": "Random Forest",
}
TRAIN_PERCENT = 30


@dataclass(frozen=True)
class SplitPlan:
    train_ids: tuple[int, ...]
    test1_ids: tuple[int, ...]
    test2_ids: tuple[int, ...]
    seed: int

    def test_ids(self, test_id: int) -> tuple[int, ...]:
        return self.test1_ids if test_id == 1 else self.test2_ids


def author_stream(seed: int, author: str) -> np.random.Generator:
    key = int.from_bytes(hashlib.sha256(author.encode("utf-8")).digest()[:8], "little")
    return np.random.default_rng([seed, key])


def partition_sizes(n: int) -> tuple[int, int, int]:
    """30% train (rounded half up), remainder halved with the odd one in test 1."""
    n_train = (TRAIN_PERCENT * n + 50) // 100
    rest = n - n_train
    return n_train, rest - rest // 2, rest // 2


def split(corpus: Corpus, seed: int) -> SplitPlan:
    """Stratified 30/35/35 split, shuffling each author with its own stream."""
    docs = corpus.documents
    by_author: dict[str, list[int]] = {a: [] for a in corpus.authors}
    for i, doc in enumerate(docs):
        by_author[doc.author].append(i)
    train, test1, test2 = [], [], []
    for author in corpus.authors:
        # canonical order first, so the plan does not depend on file order
        ids = sorted(by_author[author], key=lambda i: (docs[i].source_id, docs[i].text, i))
        if len(ids) < 3:
            raise TooFewDocuments(author, len(ids))
        shuffled = [ids[j] for j in author_stream(seed, author).permutation(len(ids))]
        n_train, n_t1, _ = partition_sizes(len(ids))
        train += shuffled[:n_train]
        test1 += shuffled[n_train:n_train + n_t1]
        test2 += shuffled[n_train + n_t1:]
    return SplitPlan(tuple(sorted(train)), tuple(sorted(test1)), tuple(sorted(test2)), seed)


@dataclass(frozen=True)
class GridResult:
    weight: WeightScheme
    token: NGramSpec
    classifier: str
    test_id: int
    report: EvalReport | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.report is not None

    def metric_strings(self) -> tuple[str, str, str]:
        if self.report is None:
            flag = f"ERROR {self.error}"
            return flag, flag, flag
        return self.report.formatted()


@dataclass
class Audit:
    """Log of which documents each grid stage read, for leakage checks."""

    events: list[tuple[str, str, tuple[int, ...]]] = field(default_factory=list)

    def record(self, phase: str, what: str, ids: Iterable[int]):
        self.events.append((phase, what, tuple(ids)))

    def touched(self, phase: str) -> set[int]:
        return {i for p, _, ids in self.events if p == phase for i in ids}

    def leaked(self, plan: SplitPlan) -> set[int]:
        """Test documents read while fitting vocabularies or models."""
        return self.touched("fit") & (set(plan.test1_ids) | set(plan.test2_ids))


def _fit(name: str, train, config: GridConfig):
    if name == "NB":
        return nb_train(train, config.nb_alpha)
    if name == "SVM":
        return svm_train(train, config.svm_lambda, config.svm_epochs, config.seed)
    if name == "CTree":
        return ctree_train(train, config.ctree_alpha_sig, config.ctree_min_node)
    if name == "RF":
        m_try = default_mtry(train.n_terms) if config.rf_mtry is None else min(config.rf_mtry, train.n_terms)
        return rf_train(train, config.rf_ntree, m_try, config.seed)
    raise ValueError(f"unknown classifier {name!r}")


def _error(exc: Exception) -> str:
    return type(exc).__name__


def run_grid(corpus: Corpus, plan: SplitPlan, config: GridConfig = GridConfig(),
             weights: Sequence[WeightScheme] = WEIGHTS, tokens: Sequence[NGramSpec] = ALL_NGRAMS,
             classifiers: Sequence[str] = CLASSIFIERS, audit: Audit | None = None) -> list[GridResult]:
    """Evaluate every (weight, token, classifier, test set) cell.

    Vocabularies and models see training documents only. A cell whose
    vocabulary or matrix is unusable is reported as an error row instead of
    aborting the grid.
    """
    audit = audit if audit is not None else Audit()
    docs = corpus.documents
    class_index = corpus.class_index
    k = len(corpus.authors)

    def take(ids, phase, what):
        audit.record(phase, what, ids)
        return [docs[i] for i in ids]

    results = []
    for weight in weights:
        for token in tokens:
            cell = f"{weight.value}/{token.name}"
            try:
                vocab = build_vocabulary(take(plan.train_ids, "fit", f"{cell}:vocabulary"), token,
                                         config.min_df, config.keep_case)
                train = vectorize(take(plan.train_ids, "fit", f"{cell}:vectorize"), vocab, weight, class_index)
            except AttributionError as exc:
                results += [GridResult(weight, token, c, t, error=_error(exc)) for c in classifiers for t in (1, 2)]
                continue
            models = {}
            for name in classifiers:
                audit.record("fit", f"{cell}:{name}", plan.train_ids)
                try:
                    models[name] = _fit(name, train, config)
                except AttributionError as exc:
                    models[name] = exc
            tests = {t: vectorize(take(plan.test_ids(t), "evaluate", f"{cell}:test{t}"), vocab, weight, class_index)
                     for t in (1, 2)}
            for name in classifiers:
                model = models[name]
                for t in (1, 2):
                    if isinstance(model, Exception):
                        results.append(GridResult(weight, token, name, t, error=_error(model)))
                        continue
                    m = tests[t]
                    results.append(GridResult(weight, token, name, t, evaluate(m.labels, model.predict(m.X), k)))
    return results


def best_cells(results: Sequence[GridResult]) -> dict[int, GridResult]:
    """Highest-accuracy successful cell per test set (earliest in grid order on ties)."""
    best: dict[int, GridResult] = {}
    for r in results:
        if r.ok and (r.test_id not in best or r.report.accuracy > best[r.test_id].report.accuracy):
            best[r.test_id] = r
    return best


def mean_accuracy(results: Iterable[GridResult], **match) -> float:
    vals = [r.report.accuracy for r in results
            if r.ok and all(getattr(r, key) == val for key, val in match.items())]
    return float(np.mean(vals)) if vals else float("nan")


RESULTS_HEADER = ("weight", "token", "classifier", "test_id", "accuracy", "tpr", "precision")


def results_csv(results: Sequence[GridResult]) -> bytes:
    """Flat one-row-per-cell results file."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULTS_HEADER)
    for r in results:
        w.writerow((r.weight.value, r.token.name, r.classifier, r.test_id, *r.metric_strings()))
    return buf.getvalue().encode("utf-8")


def _table_rows(results: Sequence[GridResult], classifier: str):
    cells = {(r.weight, r.token, r.test_id): r for r in results if r.classifier == classifier}
    weights = [w for w in WEIGHTS if any(key[0] == w for key in cells)]
    tokens = [t for t in ALL_NGRAMS if any(key[1] == t for key in cells)]
    for weight in weights:
        for token in tokens:
            metrics = []
            for t in (1, 2):
                r = cells.get((weight, token, t))
                metrics += list(r.metric_strings()) if r else ["", "", ""]
            yield weight, token, metrics


_METRIC_COLS = ("Accuracy", "TPR", "Precision")


def emit_tables(results: Sequence[GridResult], format: str = "markdown") -> bytes:
    """One table per classifier, rows grouped by weight then token."""
    if not results:
        raise ValueError("no results to tabulate")
    present = [c for c in CLASSIFIERS if any(r.classifier == c for r in results)]
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("classifier", "weight", "token",
                    *(f"test{t}_{m.lower()}" for t in (1, 2) for m in _METRIC_COLS)))
        for c in present:
            for weight, token, metrics in _table_rows(results, c):
                w.writerow((c, weight.label, token.label, *metrics))
        return buf.getvalue().encode("utf-8")
    if format != "markdown":
        raise ValueError(f"unknown table format {format!r}")
    lines = []
    for i, c in enumerate(present, start=1):
        lines += [f"## Table {i}. {CLASSIFIER_TITLES[c]}", ""]
        lines.append("| Weight | Token | " + " | ".join(f"{s} {m}" for s in ("Test One", "Test Two")
                                                      for m in _METRIC_COLS) + " |")
        lines.append("|---|---|" + "---:|" * 6)
        last_weight = None
        for weight, token, metrics in _table_rows(results, c):
            shown = weight.label if weight != last_weight else ""
            last_weight = weight
            lines.append(f"| {shown} | {token.label} | " + " | ".join(metrics) + " |")
        lines.append("")
    return "\n".join(lines).encode("utf-8")


def summary_lines(results: Sequence[GridResult]) -> list[str]:
    out = []
    for t, r in sorted(best_cells(results).items()):
        out.append(f"best on test {t}: {r.classifier} {r.weight.label} {r.token.label} "
                   f"accuracy {fmt(r.report.accuracy)}")
    return out
