"""Synthetic Hinglish-like multi-author corpora with a separability dial.

An author writes by drawing items independently from ``base_vocab``. An item
that names a variant group (``"hai"`` for ``{"hai", "h", "hain"}``) is a slot
filled with one of the group's surface forms according to the author's
spelling preferences. Items containing a space are fixed collocations.

:class:`SeparabilityDial` blends every author towards the across-author average:
``variant_skew`` controls spelling preferences (0: everyone shares the
average, 1: each author's own), ``vocab_overlap`` controls the base vocabulary
(0: each author's own, 1: everyone shares the average).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .config import flatten, parse_toml
from .errors import InvalidProfile
from .ingest import Corpus, Document, Message

_TOL = 1e-9


@dataclass(frozen=True)
class AuthorProfile:
    name: str
    base_vocab: Mapping[str, float]
    variant_prefs: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    msg_len: tuple[float, float] = (8.0, 4.0)

    def __post_init__(self):
        if not self.name.strip():
            raise InvalidProfile("author name is empty")
        _check_distribution(f"{self.name}.base_vocab", self.base_vocab)
        for group, dist in self.variant_prefs.items():
            if len(dist) < 2:
                raise InvalidProfile(f"{self.name}.variant_prefs.{group} needs at least 2 surface forms")
            _check_distribution(f"{self.name}.variant_prefs.{group}", dist)
        mean, std = self.msg_len
        if not (mean > 0 and std >= 0):
            raise InvalidProfile(f"{self.name}.msg_len must be (mean > 0, stddev >= 0)")


@dataclass(frozen=True)
class SeparabilityDial:
    variant_skew: float = 1.0
    vocab_overlap: float = 0.5

    def __post_init__(self):
        for name in ("variant_skew", "vocab_overlap"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def _check_distribution(where: str, dist: Mapping[str, float]):
    if not dist:
        raise InvalidProfile(f"{where} is empty")
    if any(not w.strip() for w in dist):
        raise InvalidProfile(f"{where} contains an empty word")
    probs = list(dist.values())
    if any(not (isinstance(p, (int, float)) and p >= 0) for p in probs):
        raise InvalidProfile(f"{where} has a negative or non-numeric probability")
    if abs(math.fsum(probs) - 1.0) > _TOL:
        raise InvalidProfile(f"{where} sums to {math.fsum(probs)!r}, not 1")


def _average(dists: Sequence[Mapping[str, float]]) -> dict[str, float]:
    keys = sorted(set().union(*dists))
    return {k: math.fsum(d.get(k, 0.0) for d in dists) / len(dists) for k in keys}


def _blend(own: Mapping[str, float], shared: Mapping[str, float], w_own: float) -> dict[str, float]:
    keys = sorted(set(own) | set(shared))
    return {k: w_own * own.get(k, 0.0) + (1.0 - w_own) * shared.get(k, 0.0) for k in keys}


class _Sampler:
    """Dial-adjusted item and variant distributions for one author."""

    def __init__(self, profile: AuthorProfile, base: dict, variants: dict):
        self.profile = profile
        self.items = list(base)
        p = np.array([base[w] for w in self.items])
        self.p = p / p.sum()
        self.groups = {g: (list(d), np.array(list(d.values())) / sum(d.values())) for g, d in variants.items()}

    def message(self, rng: np.random.Generator) -> list[str]:
        mean, std = self.profile.msg_len
        n = max(1, int(round(rng.normal(mean, std))))
        words = []
        for j in rng.choice(len(self.items), size=n, p=self.p):
            item = self.items[j]
            if item in self.groups:
                forms, probs = self.groups[item]
                words.append(forms[rng.choice(len(forms), p=probs)])
            else:
                words.extend(item.split())
        return words


def _samplers(profiles: Sequence[AuthorProfile], dial: SeparabilityDial) -> list[_Sampler]:
    if len(profiles) < 2:
        raise InvalidProfile("need at least two author profiles")
    names = [p.name for p in profiles]
    if len(set(names)) != len(names):
        raise InvalidProfile("author names must be distinct")
    shared_base = _average([p.base_vocab for p in profiles])
    groups = sorted(set().union(*(p.variant_prefs for p in profiles)))
    shared_var = {g: _average([p.variant_prefs[g] for p in profiles if g in p.variant_prefs]) for g in groups}
    out = []
    for p in profiles:
        base = _blend(p.base_vocab, shared_base, 1.0 - dial.vocab_overlap)
        variants = {g: _blend(p.variant_prefs.get(g, shared_var[g]), shared_var[g], dial.variant_skew)
                    for g in groups}
        out.append(_Sampler(p, base, variants))
    return out


def generate(profiles: Sequence[AuthorProfile], dial: SeparabilityDial = SeparabilityDial(),
             n_docs_per_author: int = 50, words_per_doc: int = 100, seed: int = 0) -> Corpus:
    """Sample a corpus with exactly ``words_per_doc`` words in every document."""
    if n_docs_per_author < 1 or words_per_doc < 1:
        raise ValueError("n_docs_per_author and words_per_doc must be positive")
    docs = []
    for idx, sampler in enumerate(_samplers(profiles, dial)):
        rng = np.random.default_rng([seed, idx])
        name = sampler.profile.name
        for d in range(n_docs_per_author):
            words: list[str] = []
            while len(words) < words_per_doc:
                words.extend(sampler.message(rng))
            docs.append(Document(name, " ".join(words[:words_per_doc]), words_per_doc, f"synth:{name}:{d}"))
    return Corpus.from_documents(docs)


def generate_messages(profiles: Sequence[AuthorProfile], dial: SeparabilityDial = SeparabilityDial(),
                      n_messages: int = 200, seed: int = 0) -> list[Message]:
    """An interleaved chat log: speakers drawn uniformly, lengths from ``msg_len``."""
    samplers = _samplers(profiles, dial)
    rng = np.random.default_rng([seed, len(samplers), n_messages])
    out = []
    for i in range(n_messages):
        s = samplers[int(rng.integers(len(samplers)))]
        minute = i % 60
        out.append(Message(s.profile.name, " ".join(s.message(rng)), f"01/01/20, {10 + i // 60:02d}:{minute:02d}"))
    return out


def load_profiles(raw: bytes | str) -> tuple[list[AuthorProfile], SeparabilityDial]:
    """Profiles from TOML::

        dial.variant_skew = 1.0
        [authors.asha]
        msg_len = [8.0, 4.0]
        base_vocab = { yaar = 0.5, hai = 0.5 }
        variant_prefs.hai = { hai = 0.8, h = 0.2 }
    """
    doc = parse_toml(raw)
    dial_keys = flatten(doc.get("dial", {}))
    unknown = set(dial_keys) - {"variant_skew", "vocab_overlap"}
    if unknown:
        raise InvalidProfile(f"unknown dial keys: {sorted(unknown)}")
    dial = SeparabilityDial(**{k: float(v) for k, v in dial_keys.items()})
    profiles = []
    for name, body in doc.get("authors", {}).items():
        try:
            profiles.append(AuthorProfile(
                name=name,
                base_vocab={str(k): float(v) for k, v in body["base_vocab"].items()},
                variant_prefs={g: {str(k): float(v) for k, v in d.items()}
                               for g, d in body.get("variant_prefs", {}).items()},
                msg_len=tuple(float(x) for x in body.get("msg_len", (8.0, 4.0))),
            ))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidProfile(f"author {name!r}: {exc}") from None
    if len(profiles) < 2:
        raise InvalidProfile("profiles file must define at least two [authors.*] tables")
    return profiles, dial


# --- default pack --------------------------------------------------------

_CORE = (
    "yaar kal aaj ghar bhai ok toh abhi chal dekh sahi time kaam phone ko se ka ki ke "
    "tu tum mujhe mera teri bas haan ho gaya kar karna bol pata bahut thoda log din raat "
    "exam college party khana paani movie class bro lol"
).split()

# variant group -> surface forms; author i prefers forms[i % len(forms)]
VARIANT_GROUPS = {
    "hai": ("hai", "h", "hain", "he"),
    "main": ("mein", "main", "me", "mai"),
    "raha": ("raha", "rha"),
    "nahi": ("nahi", "nhi", "nahin", "nai"),
    "kya": ("kya", "kyaa", "kia"),
    "accha": ("accha", "acha", "achha", "achchha"),
    "kyun": ("kyun", "kyu", "kyon", "kiu"),
    "kuch": ("kuch", "kuchh", "kch"),
    "bhi": ("bhi", "bhee"),
}

_TOPICS = {
    "asha": ("office", "meeting", "chai", "mummy", "shopping", "dilli", "kya scene", "chal na"),
    "dev": ("cricket", "match", "gym", "bike", "score", "bhaiya", "koi na", "ho jayega"),
    "kiran": ("assignment", "library", "notes", "prof", "lab", "deadline", "sun na", "pakka na"),
    "ravi": ("game", "server", "laptop", "code", "bug", "update", "scene kya", "bol na"),
}


def default_profiles(preference: float = 0.7, slot_mass: float = 0.25,
                     topic_mass: float = 0.08) -> list[AuthorProfile]:
    """Four authors sharing a core vocabulary, differing in spelling habits and topics.

    ``preference`` is the probability an author uses their own preferred form
    of a variant group; the rest is spread evenly over the other forms.
    """
    profiles = []
    for i, (name, topics) in enumerate(_TOPICS.items()):
        weights = {w: (1.0 - slot_mass - topic_mass) / len(_CORE) for w in _CORE}
        for g in VARIANT_GROUPS:
            weights[g] = slot_mass / len(VARIANT_GROUPS)
        for t in topics:
            weights[t] = weights.get(t, 0.0) + topic_mass / len(topics)
        total = math.fsum(weights.values())
        base = {w: p / total for w, p in weights.items()}
        prefs = {}
        for g, forms in VARIANT_GROUPS.items():
            own = forms[i % len(forms)]
            rest = (1.0 - preference) / (len(forms) - 1)
            prefs[g] = {f: (preference if f == own else rest) for f in forms}
        profiles.append(AuthorProfile(name, base, prefs, msg_len=(6.0 + 2 * i, 3.0)))
    return profiles
