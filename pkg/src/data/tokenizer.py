"""
tokenizer.py
============

This module turns raw text into tokens and tokens into sentences.

Modules
-------
document
    Handle raw records and tokenized documents.
labeling
    Handle keyphrase categories and weak sentence labels.
tokenizer
    Handle tokenization and sentence splitting.
vocab
    Handle vocabulary and index encoding.
"""

import re
from typing import List, Tuple

from .constants import ABBREVIATIONS, DIGIT_TOKEN, SENTENCE_END

# Alternatives are tried left to right: the digit placeholder itself (keeps
# tokenize idempotent), whitelisted abbreviations not glued to a word, digit
# runs not glued to letters, alphanumeric words, then any single other char.
TOKEN_PATTERN = re.compile(
    "|".join([
        re.escape(DIGIT_TOKEN),
        r"(?<![^\W_])(?:" + "|".join(re.escape(abbr) for abbr in ABBREVIATIONS) + r")",
        r"(?P<number>\d+(?:\.\d+)*)(?![^\W_])",
        r"[^\W_]+",
        r"\S",
    ])
)


def tokenize(text: str) -> List[str]:
    """
    Split a text into lowercased tokens.

    Punctuation marks become standalone tokens, every standalone run of digits
    (integers and decimals) becomes ``<digit>`` and the abbreviations "e.g." and
    "i.e." are kept whole. Digits inside alphanumerics ("ipv4") are left untouched.

    :param text: Raw text.
    :type text: str

    :returns: The tokens of the text (empty list for an empty text).
    :rtype: list[str]

    :Example:
        >>> tokenize("We use 25 filters.")
        ['we', 'use', '<digit>', 'filters', '.']
    """
    tokens = []
    for match in TOKEN_PATTERN.finditer(text.lower()):
        if match.group("number") is not None:
            tokens.append(DIGIT_TOKEN)
        else:
            tokens.append(match.group(0))
    return tokens


def split_sentences(tokens: List[str]) -> List[Tuple[int, int]]:
    """
    Split a token sequence into sentences.

    A sentence ends after every "." token. Abbreviations are single tokens
    ("e.g.") so they never end a sentence. A trailing fragment without "."
    forms the last sentence.

    :param tokens: Tokens produced by :func:`tokenize`.
    :type tokens: list[str]

    :returns: Half-open ``(start, end)`` spans partitioning ``[0, len(tokens))``.
    :rtype: list[tuple[int, int]]
    """
    spans = []
    start = 0
    for i, token in enumerate(tokens):
        if token == SENTENCE_END:
            spans.append((start, i + 1))
            start = i + 1

    if start < len(tokens):
        spans.append((start, len(tokens)))

    return spans
