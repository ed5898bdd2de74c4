"""Command-line entry point: ``shortattrib <command> [flags]``.

Exit codes: 0 success, 1 validation or input error, 2 every grid cell
failed, 3 model/vocabulary hash mismatch, 64 usage error. Environment
variables are never consulted.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import experiment, synthgen
from .classifiers import ConditionalTreeModel, ctree_train, default_mtry, nb_train, rf_train, svm_train
from .classifiers.io import dumps_model, loads_model
from .config import GridConfig, load_config
from .errors import AttributionError, LengthMismatch, UnknownAuthor, VocabularyMismatch
from .features import (NGramSpec, Vocabulary, WeightScheme, apply_weighting, build_vocabulary,
                       count_matrix, top_distinctive_terms, vectorize)
from .ingest import Corpus, chunk_messages, dump_corpus, load_corpus, parse_jsonl, parse_whatsapp
from .metrics import evaluate, fmt

EXIT_OK, EXIT_INVALID, EXIT_GRID_FAILED, EXIT_SKEW, EXIT_USAGE = 0, 1, 2, 3, 64

CLASSIFIER_NAMES = {"nb": "NB", "svm": "SVM", "ctree": "CTree", "rf": "RF"}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# --- file helpers ----------------------------------------------------------

def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str, data: bytes | str):
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(data)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _config(args) -> GridConfig:
    cfg = load_config(_read(args.config)) if getattr(args, "config", None) else GridConfig()
    seed = getattr(args, "seed", None)
    if seed is not None:
        cfg = GridConfig(**{**cfg.__dict__, "seed": seed})
    return cfg


def _token(name: str) -> NGramSpec:
    try:
        return NGramSpec.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _weight(name: str) -> WeightScheme:
    try:
        return WeightScheme.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _print_counts(corpus: Corpus, out):
    for author, n in corpus.counts().items():
        print(f"{author}\t{n}", file=out)


# --- commands --------------------------------------------------------------

def cmd_ingest(args, out, err) -> int:
    raw = _read(args.whatsapp or args.jsonl)
    if args.whatsapp:
        target = args.target_words if args.target_words is not None else _config(args).target_words
        corpus = chunk_messages(parse_whatsapp(raw, args.format), target)
    else:
        corpus = Corpus.from_documents(parse_jsonl(raw))
    _write(args.out, dump_corpus(corpus))
    _print_counts(corpus, out)
    if len(corpus.authors) < 2:
        print(f"warning: corpus has {len(corpus.authors)} author(s); train and grid need at least 2",
              file=err)
    return EXIT_OK


def cmd_synth(args, out, err) -> int:
    if args.profiles:
        profiles, dial = synthgen.load_profiles(_read(args.profiles))
    else:
        profiles, dial = synthgen.default_profiles(), synthgen.SeparabilityDial()
    overrides = {k: v for k, v in (("variant_skew", args.variant_skew),
                                   ("vocab_overlap", args.vocab_overlap)) if v is not None}
    if overrides:
        dial = synthgen.SeparabilityDial(**{**dial.__dict__, **overrides})
    corpus = synthgen.generate(profiles, dial, args.docs_per_author, args.words_per_doc, args.seed)
    _write(args.out, dump_corpus(corpus))
    _print_counts(corpus, out)
    return EXIT_OK


def cmd_featurize(args, out, err) -> int:
    corpus = load_corpus(_read(args.corpus))
    if args.vocab:
        vocab = Vocabulary.from_text(_read(args.vocab).decode("utf-8"))
    else:
        vocab = build_vocabulary(corpus.documents, args.token, args.min_df, args.keep_case)
        if args.out_vocab:
            _write(args.out_vocab, vocab.to_text())
    matrix = vectorize(corpus.documents, vocab, args.weight, corpus.class_index)
    _write(args.out, matrix.to_coordinate_text())
    print(f"{matrix.n_docs} documents x {matrix.n_terms} terms ({args.weight.label}, {vocab.spec.label})",
          file=out)
    return EXIT_OK


def _train(name: str, matrix, cfg: GridConfig, bootstrap: bool):
    if name == "RF":
        m_try = default_mtry(matrix.n_terms) if cfg.rf_mtry is None else min(cfg.rf_mtry, matrix.n_terms)
        return rf_train(matrix, cfg.rf_ntree, m_try, cfg.seed, bootstrap)
    if name == "NB":
        return nb_train(matrix, cfg.nb_alpha)
    if name == "SVM":
        return svm_train(matrix, cfg.svm_lambda, cfg.svm_epochs, cfg.seed)
    return ctree_train(matrix, cfg.ctree_alpha_sig, cfg.ctree_min_node)


def cmd_train(args, out, err) -> int:
    cfg = _config(args)
    corpus = load_corpus(_read(args.corpus))
    if len(corpus.authors) < 2:
        raise InputError(f"{args.corpus}: need at least 2 authors, found {len(corpus.authors)}")
    if args.vocab:
        vocab = Vocabulary.from_text(_read(args.vocab).decode("utf-8"))
    else:
        vocab = build_vocabulary(corpus.documents, args.token, cfg.min_df, cfg.keep_case)
    matrix = vectorize(corpus.documents, vocab, args.weight, corpus.class_index)
    name = CLASSIFIER_NAMES[args.classifier]
    model = _train(name, matrix, cfg, bootstrap=not args.no_bootstrap)
    _write(args.out_model, dumps_model(model, vocab, corpus.authors, args.weight))
    if not args.vocab:
        _write(args.out_vocab, vocab.to_text())
    print(f"trained {name} on {matrix.n_docs} documents x {matrix.n_terms} terms", file=out)
    return EXIT_OK


def _scores(model, X) -> np.ndarray:
    """Per-class scores: NB log-posteriors, SVM margins, RF votes, CTree one-hot."""
    if isinstance(model, ConditionalTreeModel):
        pred = model.predict(X)
        return np.eye(model.n_classes)[pred]
    if hasattr(model, "votes"):
        return model.votes(X).astype(float)
    return model.decision_matrix(X)


def cmd_predict(args, out, err) -> int:
    vocab = Vocabulary.from_text(_read(args.vocab).decode("utf-8"))
    model, classes, scheme = loads_model(_read(args.model).decode("utf-8"), vocab)
    corpus = load_corpus(_read(args.corpus))
    X = apply_weighting(count_matrix(corpus.documents, vocab), vocab, scheme)
    scores = _scores(model, X)
    pred = model.predict(X)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("row", "source_id", "predicted", *(f"score:{c}" for c in classes)))
    for i, doc in enumerate(corpus.documents):
        w.writerow((i, doc.source_id, classes[pred[i]], *(f"{s:.9g}" for s in scores[i])))
    _write(args.out, buf.getvalue())
    print(f"{len(corpus.documents)} predictions written to {args.out}", file=out)
    return EXIT_OK


def cmd_eval(args, out, err) -> int:
    rows = list(csv.reader(io.StringIO(_read(args.predictions).decode("utf-8"))))
    if not rows or rows[0][:3] != ["row", "source_id", "predicted"]:
        raise InputError(f"{args.predictions}: not a predictions file")
    classes = [h.split(":", 1)[1] for h in rows[0][3:]]
    index = {c: i for i, c in enumerate(classes)}
    body = rows[1:]
    gold = load_corpus(_read(args.gold)).documents
    if len(body) != len(gold):
        raise LengthMismatch(f"{len(body)} predictions vs {len(gold)} gold documents")
    true, pred = [], []
    for rec, doc in zip(body, gold):
        if rec[1] != doc.source_id:
            raise InputError(f"row {rec[0]}: source_id {rec[1]!r} does not match gold {doc.source_id!r}")
        if doc.author not in index:
            raise UnknownAuthor(doc.author)
        if rec[2] not in index:
            raise InputError(f"row {rec[0]}: predicted author {rec[2]!r} is not a model class")
        true.append(index[doc.author])
        pred.append(index[rec[2]])
    rep = evaluate(true, pred, len(classes))
    print(f"accuracy\t{fmt(rep.accuracy)}", file=out)
    print(f"tpr\t{fmt(rep.tpr)}", file=out)
    print(f"precision\t{fmt(rep.precision)}", file=out)
    print(f"documents\t{rep.n_docs}", file=out)
    return EXIT_OK


def cmd_grid(args, out, err) -> int:
    cfg = _config(args)
    corpus = load_corpus(_read(args.corpus))
    if len(corpus.authors) < 2:
        raise InputError(f"{args.corpus}: need at least 2 authors, found {len(corpus.authors)}")
    plan = experiment.split(corpus, cfg.seed)
    results = experiment.run_grid(corpus, plan, cfg)
    out_dir = Path(args.out_dir)
    _write(str(out_dir / "results.csv"), experiment.results_csv(results))
    _write(str(out_dir / "tables.md"), experiment.emit_tables(results, "markdown"))
    failed = sum(not r.ok for r in results)
    if failed == len(results):
        print("error: every grid cell failed", file=err)
        return EXIT_GRID_FAILED
    for line in experiment.summary_lines(results):
        print(line, file=out)
    if failed:
        print(f"warning: {failed} of {len(results)} cells failed (see results.csv)", file=err)
    return EXIT_OK


def cmd_distinctive(args, out, err) -> int:
    corpus = load_corpus(_read(args.corpus))
    vocab = build_vocabulary(corpus.documents, args.token, args.min_df)
    matrix = vectorize(corpus.documents, vocab, args.weight, corpus.class_index)
    for author, terms in zip(corpus.authors, top_distinctive_terms(matrix, vocab, args.k)):
        print(f"{author}\t" + " ".join(f"{t}({s:.4f})" for t, s in terms), file=out)
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shortattrib", description="Authorship attribution for short chat texts.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse a WhatsApp export or JSONL file into a corpus")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--whatsapp", metavar="PATH")
    src.add_argument("--jsonl", metavar="PATH")
    p.add_argument("--format", choices=("auto", "bracketed", "dashed"), default="auto")
    p.add_argument("--target-words", type=int, metavar="N", help="default: chunk.target_words from --config, else 100")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic multi-author corpus")
    p.add_argument("--profiles", metavar="PATH")
    p.add_argument("--variant-skew", type=float)
    p.add_argument("--vocab-overlap", type=float)
    p.add_argument("--docs-per-author", type=int, default=50)
    p.add_argument("--words-per-doc", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("featurize", help="build a vocabulary and a coordinate-format matrix")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--token", type=_token, default=NGramSpec("word", 1))
    p.add_argument("--weight", type=_weight, default=WeightScheme.TFIDF)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--keep-case", action="store_true")
    p.add_argument("--vocab", metavar="PATH", help="reuse this vocabulary instead of building one")
    p.add_argument("--out-vocab", metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="train one classifier on a whole corpus")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--classifier", required=True, choices=sorted(CLASSIFIER_NAMES))
    p.add_argument("--token", type=_token, default=NGramSpec("word", 1))
    p.add_argument("--weight", type=_weight, default=WeightScheme.TFIDF)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--no-bootstrap", action="store_true", help="random forest: train every tree on all rows")
    p.add_argument("--vocab", metavar="PATH")
    p.add_argument("--out-vocab", metavar="PATH")
    p.add_argument("--out-model", required=True, metavar="PATH")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict authors with a trained model")
    p.add_argument("--model", required=True, metavar="PATH")
    p.add_argument("--vocab", required=True, metavar="PATH")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score a predictions file against gold labels")
    p.add_argument("--predictions", required=True, metavar="PATH")
    p.add_argument("--gold", required=True, metavar="PATH")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="run the full weight x token x classifier grid")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--out-dir", required=True, metavar="PATH")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("distinctive", help="list each author's most distinctive terms")
    p.add_argument("--corpus", required=True, metavar="PATH")
    p.add_argument("--token", type=_token, default=NGramSpec("word", 1))
    p.add_argument("--weight", type=_weight, default=WeightScheme.TFIDF)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--k", type=int, default=10)
    p.set_defaults(func=cmd_distinctive)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    sub = parser._subparsers._group_actions[0].choices
    if not argv or (argv[0] in sub and len(argv) == 1):
        target = sub[argv[0]] if argv else parser
        err.write(target.format_usage())
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    if args.command is None:
        err.write(parser.format_usage())
        return EXIT_USAGE
    if args.command == "train" and not args.vocab and not args.out_vocab:
        err.write(f"{sub['train'].format_usage()}train: error: --out-vocab is required unless --vocab is given\n")
        return EXIT_USAGE
    try:
        return args.func(args, out, err)
    except VocabularyMismatch as exc:
        print(f"error: {exc}", file=err)
        return EXIT_SKEW
    except (AttributionError, InputError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
