"""Chat-export and JSONL ingestion into author-labelled corpora.

WhatsApp exports come in two line grammars::

    [12/05/18, 22:01:10] Ravi: haan        (bracketed, iOS style)
    12/05/18, 22:01 - Asha: kya kar raha   (dashed, Android style)

Lines that match neither grammar continue the previous message. Text is kept
verbatim (emoji, punctuation, casing); normalisation happens at feature time.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyInput, MalformedRecord

_DATE = r"\d{1,4}[./-]\d{1,2}[./-]\d{1,4}"
_TIME = r"\d{1,2}[:.]\d{2}(?:[:.]\d{2})?(?:\s?[AaPp]\.?\s?[Mm]\.?)?"

GRAMMARS = {
    "bracketed": re.compile(rf"^\[(?P<stamp>{_DATE},?\s+{_TIME})\]\s?(?P<rest>.*)$"),
    "dashed": re.compile(rf"^(?P<stamp>{_DATE},?\s+{_TIME})\s+[-–]\s+(?P<rest>.*)$"),
}
_AUTHOR = re.compile(r'^(?P<author>[^:"“”]+?):(?:\s+(?P<text>.*))?$')
MEDIA_PLACEHOLDERS = frozenset({"<media omitted>", "image omitted", "video omitted"})
# directional marks and BOMs that exports sprinkle at line starts
_INVISIBLE = "\ufeff\u200e\u200f"


@dataclass(frozen=True)
class Message:
    author: str
    text: str
    timestamp: str | None = None


@dataclass(frozen=True)
class Document:
    author: str
    text: str
    word_count: int
    source_id: str

    @classmethod
    def from_text(cls, author: str, text: str, source_id: str) -> "Document":
        return cls(author, text, len(text.split()), source_id)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    authors: tuple[str, ...]

    def __post_init__(self):
        if list(self.authors) != sorted(set(self.authors)):
            raise ValueError("authors must be sorted and distinct")
        known = set(self.authors)
        for doc in self.documents:
            if doc.author not in known:
                raise ValueError(f"document author {doc.author!r} missing from authors")

    @classmethod
    def from_documents(cls, documents: Iterable[Document]) -> "Corpus":
        docs = tuple(documents)
        return cls(docs, tuple(sorted({d.author for d in docs})))

    def __len__(self):
        return len(self.documents)

    @property
    def class_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.authors)}

    def counts(self) -> dict[str, int]:
        out = dict.fromkeys(self.authors, 0)
        for d in self.documents:
            out[d.author] += 1
        return out


def _decode(raw: bytes | str) -> str:
    if isinstance(raw, bytes):
        return raw.decode("utf-8", errors="replace")
    return raw


def _is_media(text: str) -> bool:
    return text.strip(_INVISIBLE + " ").lower() in MEDIA_PLACEHOLDERS


def parse_whatsapp(raw: bytes | str, format_hint: str = "auto") -> list[Message]:
    """Parse a WhatsApp ``.txt`` export into messages in file order.

    System lines (no ``Author:`` segment) and media placeholders are dropped.
    Raises :class:`EmptyInput` when no line matches the message grammar.
    """
    if format_hint not in ("auto", "bracketed", "dashed"):
        raise ValueError(f"unknown format_hint {format_hint!r}")
    grammar = None if format_hint == "auto" else GRAMMARS[format_hint]

    messages: list[Message] = []
    current: list | None = None  # [author, [text parts], stamp]
    bad_lines: list[int] = []
    n_headers = 0

    def flush():
        if current is None:
            return
        text = " ".join(p for p in current[1] if p)
        if text and not _is_media(text):
            messages.append(Message(current[0], text, current[2]))

    for line_no, line in enumerate(_decode(raw).splitlines(), start=1):
        line = line.lstrip(_INVISIBLE).rstrip()
        if not line:
            continue
        if grammar is None:
            for candidate in GRAMMARS.values():
                if candidate.match(line):
                    grammar = candidate
                    break
        m = grammar.match(line) if grammar is not None else None
        if m is None:
            if current is not None:
                current[1].append(line.strip())
            else:
                bad_lines.append(line_no)
            continue

        n_headers += 1
        flush()
        current = None
        am = _AUTHOR.match(m.group("rest"))
        if am is None or not am.group("author").strip():
            continue  # system line
        current = [am.group("author").strip(), [(am.group("text") or "").strip()], m.group("stamp")]
    flush()

    if n_headers == 0:
        raise EmptyInput(bad_lines)
    return messages


def parse_jsonl(raw: bytes | str, keep_source_id: bool = False) -> list[Document]:
    """One :class:`Document` per non-blank JSON line with string ``author``/``text``.

    With ``keep_source_id`` a string ``source_id`` field already present in a
    record is preserved (canonical corpus files); otherwise ids are
    ``jsonl:<line>``.
    """
    docs = []
    for line_no, line in enumerate(_decode(raw).split("\n"), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid JSON ({exc.msg})") from None
        if not isinstance(rec, dict):
            raise MalformedRecord(line_no, "record is not an object")
        for field in ("author", "text"):
            if field not in rec:
                raise MalformedRecord(line_no, f"missing field {field!r}")
            if not isinstance(rec[field], str):
                raise MalformedRecord(line_no, f"field {field!r} is not a string")
        author = rec["author"].strip()
        if not author:
            raise MalformedRecord(line_no, "empty author")
        if not rec["text"].strip():
            raise MalformedRecord(line_no, "empty text")
        source_id = f"jsonl:{line_no}"
        if keep_source_id and isinstance(rec.get("source_id"), str):
            source_id = rec["source_id"]
        docs.append(Document.from_text(author, rec["text"], source_id))
    return docs


def chunk_messages(messages: Sequence[Message], target_words: int = 100) -> Corpus:
    """Greedily pack each author's messages into documents of ``target_words``.

    A document closes once it holds at least ``target_words`` words. The last
    partial document of an author survives only with ``ceil(target_words/2)``
    words or more.
    """
    if target_words < 1:
        raise ValueError("target_words must be >= 1")
    by_author: dict[str, list[str]] = {}
    for msg in messages:
        if msg.text.split():
            by_author.setdefault(msg.author, []).append(msg.text)

    keep_min = math.ceil(target_words / 2)
    docs = []
    for author in sorted(by_author):
        parts: list[str] = []
        n_words = 0
        index = 0
        for text in by_author[author]:
            parts.append(text)
            n_words += len(text.split())
            if n_words >= target_words:
                docs.append(Document(author, " ".join(parts), n_words, f"{author}:chunk:{index}"))
                index += 1
                parts, n_words = [], 0
        if parts and n_words >= keep_min:
            docs.append(Document(author, " ".join(parts), n_words, f"{author}:chunk:{index}"))
    return Corpus.from_documents(docs)


def dump_corpus(corpus: Corpus | Iterable[Document]) -> bytes:
    """Canonical corpus JSONL: fixed field order, LF endings, UTF-8."""
    docs = corpus.documents if isinstance(corpus, Corpus) else corpus
    lines = []
    for d in docs:
        rec = {"author": d.author, "text": d.text, "source_id": d.source_id, "word_count": d.word_count}
        lines.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    return "".join(line + "\n" for line in lines).encode("utf-8")


def load_corpus(raw: bytes | str) -> Corpus:
    return Corpus.from_documents(parse_jsonl(raw, keep_source_id=True))
