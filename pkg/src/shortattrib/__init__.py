"""Authorship attribution for short, code-mixed chat texts.

Pipeline: :mod:`~shortattrib.ingest` turns chat exports into author-labelled
documents, :mod:`~shortattrib.features` maps them to sparse n-gram matrices,
:mod:`~shortattrib.classifiers` holds naive Bayes, a linear SVM, a
significance-gated tree and a random forest, and
:mod:`~shortattrib.experiment` runs the full comparison grid.
"""
__version__ = "0.1.0"
