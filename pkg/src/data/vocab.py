"""
vocab.py
========

This module handles the vocabulary and the index encoding of documents.

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

import json
import os
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .constants import (
    BOS_TOKEN, DEFAULT_VOCAB_SIZE, DIGIT_TOKEN, EOS_TOKEN, PAD_TOKEN, PEOS_TOKEN,
    SEP_TOKEN, SPECIAL_TOKENS, UNK_TOKEN, VOCAB_FORMAT_VERSION,
)
from .document import Document, KeyphraseCategory, RawRecord, format_target


class Vocab:
    """
    Bijection between tokens and ids, specials first at fixed ids.

    :param tokens: Regular tokens in id order (specials are prepended automatically).
    :type tokens: list[str]

    :raises ValueError: If a token is repeated or is a special token.

    :ivar itos: Token of each id.
    :vartype itos: list[str]
    :ivar stoi: Id of each token.
    :vartype stoi: dict[str, int]
    """

    def __init__(self, tokens: Sequence[str] = ()):
        self.itos: List[str] = list(SPECIAL_TOKENS)
        self.stoi: Dict[str, int] = {token: i for i, token in enumerate(self.itos)}

        for token in tokens:
            if token in self.stoi:
                raise ValueError(f"Vocab(tokens) -- Duplicate or special token: {token}")
            self.stoi[token] = len(self.itos)
            self.itos.append(token)

    def __len__(self) -> int:
        return len(self.itos)

    def __contains__(self, token: str) -> bool:
        return token in self.stoi

    def __eq__(self, other: "Vocab") -> bool:
        return isinstance(other, Vocab) and self.itos == other.itos

    @property
    def pad_id(self) -> int:
        return self.stoi[PAD_TOKEN]

    @property
    def unk_id(self) -> int:
        return self.stoi[UNK_TOKEN]

    @property
    def bos_id(self) -> int:
        return self.stoi[BOS_TOKEN]

    @property
    def eos_id(self) -> int:
        return self.stoi[EOS_TOKEN]

    @property
    def sep_id(self) -> int:
        return self.stoi[SEP_TOKEN]

    @property
    def peos_id(self) -> int:
        return self.stoi[PEOS_TOKEN]

    @property
    def digit_id(self) -> int:
        return self.stoi[DIGIT_TOKEN]

    @property
    def regular_tokens(self) -> List[str]:
        return self.itos[len(SPECIAL_TOKENS):]

    def id_of(self, token: str) -> int:
        return self.stoi.get(token, self.unk_id)

    def token_of(self, token_id: int, oov_tokens: Sequence[str] = ()) -> str:
        """
        Token of an id of the extended vocabulary.

        :param token_id: Id in ``[0, len(vocab) + len(oov_tokens))``.
        :type token_id: int
        :param oov_tokens: Out-of-vocabulary tokens of the example.
        :type oov_tokens: list[str]

        :returns: The token.
        :rtype: str

        :raises ValueError: If the id is outside the extended vocabulary.
        """
        if 0 <= token_id < len(self.itos):
            return self.itos[token_id]
        if len(self.itos) <= token_id < len(self.itos) + len(oov_tokens):
            return oov_tokens[token_id - len(self.itos)]
        raise ValueError(f"Vocab.token_of(token_id) -- Id outside the extended vocabulary: {token_id}")

    @classmethod
    def from_counter(cls, counter: Counter, max_size: int = DEFAULT_VOCAB_SIZE) -> "Vocab":
        """
        Keep the ``max_size`` most frequent tokens, ties broken lexicographically.

        :param counter: Token frequencies.
        :type counter: collections.Counter
        :param max_size: Maximum number of regular tokens.
        :type max_size: int

        :returns: The vocabulary.
        :rtype: Vocab

        :raises ValueError: If max_size is negative.
        """
        if max_size < 0:
            raise ValueError(f"Vocab.from_counter(max_size) -- Invalid size: {max_size}")
        ranked = sorted(
            (token for token in counter if token not in SPECIAL_TOKENS),
            key=lambda token: (-counter[token], token),
        )
        return cls(ranked[:max_size])

    def save(self, path: str):
        """
        Write the vocabulary to a JSON file.

        :param path: Output path.
        :type path: str

        :raises OSError: If writing to the file fails.
        """
        content = {"format_version": VOCAB_FORMAT_VERSION, "specials": list(SPECIAL_TOKENS), "tokens": self.regular_tokens}
        with open(path, "w", encoding="utf-8") as file:
            json.dump(content, file, ensure_ascii=False)

    @classmethod
    def load(cls, path: str) -> "Vocab":
        """
        Read a vocabulary written by :meth:`save`.

        :param path: Path of the vocabulary file.
        :type path: str

        :returns: The vocabulary.
        :rtype: Vocab

        :raises FileNotFoundError: If the file does not exist.
        :raises ValueError: If the file is not a vocabulary of a supported version.
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"The specified vocabulary file was not found: '{path}'")

        with open(path, "r", encoding="utf-8") as file:
            try:
                content = json.load(file)
            except json.JSONDecodeError as error:
                raise ValueError(f"Vocab.load(path) -- Invalid JSON in '{path}': {error}")

        if not isinstance(content, dict) or content.get("format_version") != VOCAB_FORMAT_VERSION:
            raise ValueError(f"Vocab.load(path) -- Unsupported vocabulary format in '{path}'")
        if content.get("specials") != list(SPECIAL_TOKENS):
            raise ValueError(f"Vocab.load(path) -- Special tokens do not match: {content.get('specials')}")

        return cls(content["tokens"])


def build_vocab(records: Iterable[Union[RawRecord, Document]], max_size: int = DEFAULT_VOCAB_SIZE) -> Vocab:
    """
    Build a vocabulary from the source and keyphrase tokens of a corpus.

    :param records: Raw records (tokenized on the fly) or tokenized documents.
    :type records: Iterable[RawRecord | Document]
    :param max_size: Maximum number of regular tokens.
    :type max_size: int

    :returns: The vocabulary.
    :rtype: Vocab

    :raises ValueError: If the corpus is empty.
    """
    counter = Counter()
    size = 0
    for record in records:
        doc = Document.from_record(record) if isinstance(record, RawRecord) else record
        counter.update(doc.tokens)
        for kp in doc.keyphrases:
            counter.update(kp)
        size += 1

    if size == 0:
        raise ValueError("build_vocab(records) -- The corpus is empty")

    return Vocab.from_counter(counter, max_size)


@dataclass
class TokenizedExample:
    """
    Index-encoded document ready for the network.

    :ivar source_ids: Vocabulary ids of the source (OOV tokens are ``<unk>``).
    :vartype source_ids: list[int]
    :ivar source_extended_ids: Ids over the vocabulary extended with this example's OOV tokens.
    :vartype source_extended_ids: list[int]
    :ivar oov_tokens: OOV source tokens in first-occurrence order.
    :vartype oov_tokens: list[str]
    :ivar target_ids: Target ids over the extended vocabulary (empty for prediction-only input).
    :vartype target_ids: list[int]
    :ivar sentence_spans: Sentence spans of the source.
    :vartype sentence_spans: list[tuple[int, int]]
    """
    source_ids: List[int]
    source_extended_ids: List[int]
    oov_tokens: List[str]
    target_ids: List[int]
    sentence_spans: List[Tuple[int, int]]

    @property
    def source_length(self) -> int:
        return len(self.source_ids)


def encode_example(
    doc: Document,
    vocab: Vocab,
    categories: Optional[Sequence[KeyphraseCategory]] = None
) -> TokenizedExample:
    """
    Encode a document with the extended vocabulary used by the copy pathway.

    OOV source tokens receive consecutive ids from ``len(vocab)`` in
    first-occurrence order. Target tokens map to their vocabulary id, else to
    their extended id when they occur in the source, else to ``<unk>``.

    :param doc: Tokenized document.
    :type doc: Document
    :param vocab: Vocabulary.
    :type vocab: Vocab
    :param categories: Keyphrase categories; when omitted no target is encoded.
    :type categories: list[KeyphraseCategory], optional

    :returns: The encoded example.
    :rtype: TokenizedExample
    """
    oov_index: Dict[str, int] = {}
    source_ids = []
    source_extended_ids = []

    for token in doc.tokens:
        if token in vocab:
            token_id = vocab.stoi[token]
            source_ids.append(token_id)
            source_extended_ids.append(token_id)
        else:
            if token not in oov_index:
                oov_index[token] = len(vocab) + len(oov_index)
            source_ids.append(vocab.unk_id)
            source_extended_ids.append(oov_index[token])

    target_ids = []
    if categories is not None:
        for token in format_target(doc, categories):
            if token in vocab:
                target_ids.append(vocab.stoi[token])
            else:
                target_ids.append(oov_index.get(token, vocab.unk_id))

    return TokenizedExample(source_ids, source_extended_ids, list(oov_index), target_ids, list(doc.sentence_spans))


def decode_ids(token_ids: Iterable[int], vocab: Vocab, oov_tokens: Sequence[str] = ()) -> List[str]:
    """
    Translate extended-vocabulary ids back to tokens.

    :param token_ids: Ids over the extended vocabulary.
    :type token_ids: Iterable[int]
    :param vocab: Vocabulary.
    :type vocab: Vocab
    :param oov_tokens: OOV tokens of the example.
    :type oov_tokens: list[str]

    :returns: The tokens.
    :rtype: list[str]
    """
    return [vocab.token_of(token_id, oov_tokens) for token_id in token_ids]
