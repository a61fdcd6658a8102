"""
phrases.py
==========

This module normalizes keyphrases for matching and deduplication.

Modules
-------
phrases
    Handle keyphrase normalization.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import snowballstemmer

from .constants import SPECIAL_TOKENS

STEMMERS = ("none", "porter")


@dataclass(frozen=True)
class MatchConfig:
    """
    Normalization applied before comparing keyphrases.

    :ivar stemmer: "porter" or "none".
    :vartype stemmer: str
    :ivar lowercase: Whether to lowercase tokens.
    :vartype lowercase: bool

    :raises ValueError: If the stemmer is unknown.
    """
    stemmer: str = "porter"
    lowercase: bool = True

    def __post_init__(self):
        if self.stemmer not in STEMMERS:
            raise ValueError(f"MatchConfig(stemmer) -- Unknown stemmer, expected one of {STEMMERS}: {self.stemmer}")


@lru_cache(maxsize=None)
def _porter():
    # Recent snowball releases may only ship the revised English (Porter2) algorithm
    name = "porter" if "porter" in snowballstemmer.algorithms() else "english"
    return snowballstemmer.stemmer(name)


def normalize_phrase(kp: Sequence[str], match_config: MatchConfig = MatchConfig()) -> Tuple[str, ...]:
    """
    Canonical form of a keyphrase, used for both deduplication and matching.

    Special tokens such as ``<digit>`` are left untouched.

    :param kp: Keyphrase tokens.
    :type kp: list[str]
    :param match_config: Normalization to apply.
    :type match_config: MatchConfig

    :returns: Normalized tokens.
    :rtype: tuple[str, ...]
    """
    out = []
    for token in kp:
        if token in SPECIAL_TOKENS:
            out.append(token)
            continue
        if match_config.lowercase:
            token = token.lower()
        if match_config.stemmer == "porter":
            token = _porter().stemWord(token)
        out.append(token)
    return tuple(out)


def dedup_phrases(kps: Iterable[Sequence[str]], match_config: MatchConfig = MatchConfig()) -> List[List[str]]:
    """
    Remove duplicated keyphrases (after normalization), keeping first occurrences.

    :param kps: Keyphrases in order.
    :type kps: Iterable[list[str]]
    :param match_config: Normalization used to detect duplicates.
    :type match_config: MatchConfig

    :returns: The keyphrases without duplicates, in their original form.
    :rtype: list[list[str]]
    """
    seen = set()
    out = []
    for kp in kps:
        key = normalize_phrase(kp, match_config)
        if key in seen:
            continue
        seen.add(key)
        out.append(list(kp))
    return out
