"""
Turning the separability dial
=============================

``variant_skew`` blends every author's spelling preferences towards the
shared average. At 0 nobody has a habit left to detect and only topic words
remain; at 1 each author spells the way their profile says.
"""

import numpy as np

from shortattrib import synthgen
from shortattrib.config import GridConfig
from shortattrib.experiment import mean_accuracy, run_grid, split
from shortattrib.features import NGramSpec, WeightScheme

for skew in (0.0, 0.25, 0.5, 0.75, 1.0):
    accs = []
    for seed in range(3):
        corpus = synthgen.generate(synthgen.default_profiles(),
                                   synthgen.SeparabilityDial(variant_skew=skew), seed=seed)
        results = run_grid(corpus, split(corpus, seed), GridConfig(seed=seed),
                           weights=[WeightScheme.BINARY], tokens=[NGramSpec("word", 1)],
                           classifiers=["NB", "SVM"])
        accs.append([mean_accuracy(results, classifier=c) for c in ("NB", "SVM")])
    nb, svm = np.mean(accs, axis=0)
    print(f"variant_skew {skew:.2f}   NB {nb:6.2f}   SVM {svm:6.2f}")
