"""
Spelling habits as author fingerprints
======================================

Four synthetic chat authors share most of their vocabulary but spell the
common Hinglish words their own way (hai / h / hain / he, mein / main ...).
Here we look at which terms separate them.
"""

from shortattrib import synthgen
from shortattrib.features import NGramSpec, WeightScheme, build_vocabulary, top_distinctive_terms, vectorize

corpus = synthgen.generate(synthgen.default_profiles(), seed=7)
print(len(corpus), "documents by", ", ".join(corpus.authors))
print(corpus.documents[0].text[:120], "...")

# Binary word unigrams: a term scores high for an author when it shows up
# in most of their documents and rarely in everyone else's.
vocab = build_vocabulary(corpus.documents, NGramSpec("word", 1))
matrix = vectorize(corpus.documents, vocab, WeightScheme.BINARY, corpus.class_index)
for author, terms in zip(corpus.authors, top_distinctive_terms(matrix, vocab, 6)):
    print(f"{author:6s}", " ".join(f"{t}({s:.2f})" for t, s in terms))

# The same with character 3-grams. Short variants like "h" only surface
# through the grams that contain their surrounding spaces.
vocab3 = build_vocabulary(corpus.documents, NGramSpec("char", 3))
matrix3 = vectorize(corpus.documents, vocab3, WeightScheme.BINARY, corpus.class_index)
for author, terms in zip(corpus.authors, top_distinctive_terms(matrix3, vocab3, 6)):
    print(f"{author:6s}", " ".join(f"{t!r}({s:.2f})" for t, s in terms))
