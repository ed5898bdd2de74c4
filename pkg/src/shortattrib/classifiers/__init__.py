"""The four supervised classifiers.

Each trained model exposes ``predict(X)`` over a CSR matrix; the per-row
``*_predict`` functions return the class plus its score vector.
"""
from .forest import RandomForestModel, default_mtry, rf_predict, rf_train
from .naive_bayes import NaiveBayesModel, nb_predict, nb_train
from .svm import LinearSvmModel, svm_predict, svm_train
from .trees import (ConditionalTreeModel, Leaf, Split, TreeNode, ctree_train, grow_cart,
                    predict_tree, tree_predict)

__all__ = [
    "ConditionalTreeModel", "Leaf", "LinearSvmModel", "NaiveBayesModel", "RandomForestModel",
    "Split", "TreeNode", "ctree_train", "default_mtry", "grow_cart", "nb_predict", "nb_train",
    "predict_tree", "rf_predict", "rf_train", "svm_predict", "svm_train", "tree_predict",
]
