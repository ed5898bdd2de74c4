"""Experiment configuration read from a TOML file with flat dotted keys.

Example::

    split.seed = 7
    svm.lambda = 1e-2
    rf.mtry = "sqrt"

Nested tables (``[svm]`` then ``lambda = ...``) are flattened to the same keys.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, fields

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


def parse_toml(raw: bytes | str) -> dict:
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"invalid TOML: {exc}") from None


def flatten(table: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in table.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


@dataclass(frozen=True)
class GridConfig:
    seed: int = 0
    target_words: int = 100
    nb_alpha: float = 1.0
    svm_lambda: float = 1e-2
    svm_epochs: int = 20
    ctree_alpha_sig: float = 0.05
    ctree_min_node: int = 7
    rf_ntree: int = 100
    rf_mtry: int | None = None  # None -> floor(sqrt(n_terms))
    min_df: int = 1
    keep_case: bool = False

    def __post_init__(self):
        for f in fields(self):
            _validate(_KEY_OF[f.name], getattr(self, f.name))


# file key -> (attribute, kind)
KEYS = {
    "split.seed": ("seed", "uint"),
    "chunk.target_words": ("target_words", "posint"),
    "nb.alpha": ("nb_alpha", "posreal"),
    "svm.lambda": ("svm_lambda", "posreal"),
    "svm.epochs": ("svm_epochs", "posint"),
    "ctree.alpha_sig": ("ctree_alpha_sig", "unit"),
    "ctree.min_node": ("ctree_min_node", "posint"),
    "rf.ntree": ("rf_ntree", "posint"),
    "rf.mtry": ("rf_mtry", "mtry"),
    "features.min_df": ("min_df", "posint"),
    "features.keep_case": ("keep_case", "bool"),
}
_KEY_OF = {attr: key for key, (attr, _) in KEYS.items()}


def _validate(key: str, value):
    kind = KEYS[key][1]
    is_int = isinstance(value, int) and not isinstance(value, bool)
    is_real = isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "uint" and not (is_int and value >= 0):
        raise ConfigError(key, f"must be a non-negative integer, got {value!r}")
    if kind == "posint" and not (is_int and value >= 1):
        raise ConfigError(key, f"must be a positive integer, got {value!r}")
    if kind == "posreal" and not (is_real and value > 0 and value != float("inf")):
        raise ConfigError(key, f"must be a positive finite number, got {value!r}")
    if kind == "unit" and not (is_real and 0 < value < 1):
        raise ConfigError(key, f"must lie strictly between 0 and 1, got {value!r}")
    if kind == "bool" and not isinstance(value, bool):
        raise ConfigError(key, f"must be true or false, got {value!r}")
    if kind == "mtry" and value is not None and not (is_int and value >= 1):
        raise ConfigError(key, f"must be a positive integer or \"sqrt\", got {value!r}")


def config_from_mapping(values: dict) -> GridConfig:
    kwargs = {}
    for key, value in flatten(values).items():
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")
        attr, kind = KEYS[key]
        if kind == "mtry" and value == "sqrt":
            value = None
        if kind == "posreal" and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        kwargs[attr] = value
    return GridConfig(**kwargs)


def load_config(raw: bytes | str) -> GridConfig:
    return config_from_mapping(parse_toml(raw))
