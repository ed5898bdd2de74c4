"""Versioned JSON container for trained models.

Every container records the SHA-256 of the vocabulary file the model was
trained against; loading with any other vocabulary raises
:class:`~shortattrib.errors.VocabularyMismatch`. Floats are written with
``repr`` precision so a save/load round trip is exact.
"""
from __future__ import annotations

import json

import numpy as np

from ..errors import VocabularyMismatch
from ..features import Vocabulary, WeightScheme
from .base import frozen
from .forest import RandomForestModel
from .naive_bayes import NaiveBayesModel
from .svm import LinearSvmModel
from .trees import ConditionalTreeModel, Leaf, Split, TreeNode

FORMAT = "shortattrib-model"
VERSION = 1


def _tree_to_obj(node: TreeNode):
    if isinstance(node, Leaf):
        return {"leaf": node.label, "counts": list(node.class_counts)}
    return {"feature": node.feature, "threshold": node.threshold,
            "left": _tree_to_obj(node.left), "right": _tree_to_obj(node.right)}


def _tree_from_obj(obj) -> TreeNode:
    if "leaf" in obj:
        return Leaf(int(obj["leaf"]), tuple(int(c) for c in obj["counts"]))
    return Split(int(obj["feature"]), float(obj["threshold"]),
                 _tree_from_obj(obj["left"]), _tree_from_obj(obj["right"]))


def _state(model) -> tuple[str, dict]:
    if isinstance(model, NaiveBayesModel):
        return "NaiveBayes", {"alpha": model.alpha, "log_prior": model.log_prior.tolist(),
                              "log_likelihood": model.log_likelihood.tolist()}
    if isinstance(model, LinearSvmModel):
        return "LinearSvm", {"lambda": model.lam, "epochs": model.epochs, "seed": model.seed,
                             "weights": model.weights.tolist(), "bias": model.bias.tolist(),
                             "objective_history": model.objective_history.tolist(),
                             "row_scale": model.row_scale}
    if isinstance(model, ConditionalTreeModel):
        return "ConditionalTree", {"alpha_sig": model.alpha_sig, "min_node": model.min_node,
                                   "n_classes": model.n_classes, "root": _tree_to_obj(model.root)}
    if isinstance(model, RandomForestModel):
        return "RandomForest", {"m_try": model.m_try, "seed": model.seed, "n_classes": model.n_classes,
                                "bootstrap": model.bootstrap,
                                "trees": [_tree_to_obj(t) for t in model.trees]}
    raise TypeError(f"cannot serialise {type(model).__name__}")


def _model(kind: str, s: dict):
    if kind == "NaiveBayes":
        return NaiveBayesModel(frozen(s["log_prior"]), frozen(s["log_likelihood"]), float(s["alpha"]))
    if kind == "LinearSvm":
        k = len(s["bias"])
        hist = np.array(s["objective_history"], dtype=float).reshape(-1, k)
        return LinearSvmModel(frozen(s["weights"]), frozen(s["bias"]), float(s["lambda"]),
                              int(s["epochs"]), int(s["seed"]), frozen(hist), float(s["row_scale"]))
    if kind == "ConditionalTree":
        return ConditionalTreeModel(_tree_from_obj(s["root"]), float(s["alpha_sig"]),
                                    int(s["min_node"]), int(s["n_classes"]))
    if kind == "RandomForest":
        return RandomForestModel(tuple(_tree_from_obj(t) for t in s["trees"]), int(s["m_try"]),
                                 int(s["seed"]), int(s["n_classes"]), bool(s["bootstrap"]))
    raise ValueError(f"unknown model kind {kind!r}")


def dumps_model(model, vocab: Vocabulary, classes, scheme: WeightScheme) -> str:
    kind, state = _state(model)
    doc = {"format": FORMAT, "version": VERSION, "kind": kind, "vocab_sha256": vocab.digest(),
           "classes": list(classes), "scheme": scheme.value, "n_terms": len(vocab), "state": state}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def loads_model(text: str, vocab: Vocabulary | None = None):
    """Return ``(model, classes, scheme)``; checks the vocabulary hash if given."""
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError("not a shortattrib model container")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model container version {doc.get('version')!r}")
    if vocab is not None and vocab.digest() != doc["vocab_sha256"]:
        raise VocabularyMismatch("model was trained against a different vocabulary")
    return _model(doc["kind"], doc["state"]), list(doc["classes"]), WeightScheme(doc["scheme"])
