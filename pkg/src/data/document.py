"""
document.py
===========

This module handles raw records, tokenized documents and target sequences.

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

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .constants import EOS_TOKEN, KEYPHRASE_DELIMITER, MAX_SOURCE_LENGTH, PEOS_TOKEN, SENTENCE_END, SEP_TOKEN
from .tokenizer import split_sentences, tokenize


class KeyphraseCategory(str, Enum):
    """
    Category of a gold keyphrase with respect to its source document.

    - PRESENT: contiguous token subsequence of the source.
    - SEMI_PRESENT: not present, but every word occurs in a single sentence.
    - ABSENT_OTHER: neither of the above.
    """
    PRESENT = "present"
    SEMI_PRESENT = "semi_present"
    ABSENT_OTHER = "absent_other"

    @property
    def is_absent(self) -> bool:
        return self is not KeyphraseCategory.PRESENT


@dataclass
class RawRecord:
    """
    Stores one title/abstract/keyphrases record as read from the corpus.

    :ivar title: Title of the document.
    :vartype title: str
    :ivar abstract: Abstract of the document.
    :vartype abstract: str
    :ivar keyphrases: Gold keyphrases (may be empty for prediction-only input).
    :vartype keyphrases: list[str]
    :ivar id: Identifier of the record.
    :vartype id: str, optional

    :raises ValueError: If the title or the abstract is blank.
    """
    title: str
    abstract: str
    keyphrases: List[str] = field(default_factory=list)
    id: Optional[str] = None

    def __post_init__(self):
        if not self.title.strip():
            raise ValueError(f"RawRecord(title) -- The title is empty: {self.title!r}")
        if not self.abstract.strip():
            raise ValueError(f"RawRecord(abstract) -- The abstract is empty: {self.abstract!r}")

    @classmethod
    def from_json(cls, obj: Dict[str, Any], require_keyphrases: bool = False) -> "RawRecord":
        """
        Create a record from a decoded JSON object.

        The "keywords" field is a ';'-separated string (a list of strings is also accepted).

        :param obj: Decoded JSON object with "title", "abstract" and "keywords".
        :type obj: dict
        :param require_keyphrases: If true, a record without keyphrases is invalid.
        :type require_keyphrases: bool

        :returns: The corresponding record.
        :rtype: RawRecord

        :raises ValueError: If a field is missing or has the wrong type.
        """
        if not isinstance(obj, dict):
            raise ValueError(f"RawRecord.from_json(obj) -- Expected a JSON object, got: {type(obj).__name__}")

        for key in ("title", "abstract"):
            if not isinstance(obj.get(key), str):
                raise ValueError(f"RawRecord.from_json(obj) -- Missing or non-string field: {key}")

        keywords = obj.get("keywords", "")
        if isinstance(keywords, str):
            keyphrases = [kp.strip() for kp in keywords.split(KEYPHRASE_DELIMITER)]
        elif isinstance(keywords, list) and all(isinstance(kp, str) for kp in keywords):
            keyphrases = [kp.strip() for kp in keywords]
        else:
            raise ValueError(f"RawRecord.from_json(obj) -- Field keywords must be a string or a list of strings")
        keyphrases = [kp for kp in keyphrases if kp]

        if require_keyphrases and not keyphrases:
            raise ValueError(f"RawRecord.from_json(obj) -- Training records need at least one keyphrase")

        record_id = obj.get("id")
        return cls(obj["title"], obj["abstract"], keyphrases, None if record_id is None else str(record_id))


@dataclass
class Document:
    """
    Stores a tokenized document split into sentences.

    :ivar tokens: Word sequence of the source (title sentence first).
    :vartype tokens: list[str]
    :ivar sentence_spans: Half-open ``(start, end)`` spans partitioning the tokens.
    :vartype sentence_spans: list[tuple[int, int]]
    :ivar keyphrases: Gold keyphrases as token lists.
    :vartype keyphrases: list[list[str]]
    :ivar title_length: Number of leading tokens coming from the title (its "." included).
    :vartype title_length: int
    :ivar id: Identifier of the document.
    :vartype id: str, optional

    :raises ValueError: If the spans do not partition the tokens.
    """
    tokens: List[str]
    sentence_spans: List[Tuple[int, int]]
    keyphrases: List[List[str]] = field(default_factory=list)
    title_length: int = 0
    id: Optional[str] = None

    def __post_init__(self):
        self.sentence_spans = [tuple(span) for span in self.sentence_spans]
        position = 0
        for i, (start, end) in enumerate(self.sentence_spans):
            if start != position or end <= start:
                raise ValueError(f"Document(sentence_spans) -- Invalid span at index {i}: {(start, end)}")
            position = end
        if position != len(self.tokens):
            raise ValueError(f"Document(sentence_spans) -- Spans cover {position} of {len(self.tokens)} tokens")

    @classmethod
    def from_record(cls, record: RawRecord, max_length: int = MAX_SOURCE_LENGTH) -> "Document":
        """
        Tokenize a record into a document.

        The title becomes the first sentence (a "." is appended when it does not
        end with one). Sentences past ``max_length`` tokens are dropped whole.

        :param record: Raw record.
        :type record: RawRecord
        :param max_length: Maximum number of source tokens.
        :type max_length: int

        :returns: The tokenized document.
        :rtype: Document

        :raises ValueError: If the first sentence alone is longer than ``max_length``.
        """
        title_tokens = tokenize(record.title)
        if not title_tokens or title_tokens[-1] != SENTENCE_END:
            title_tokens.append(SENTENCE_END)

        tokens = title_tokens + tokenize(record.abstract)
        spans = split_sentences(tokens)

        kept = [span for span in spans if span[1] <= max_length]
        if not kept:
            raise ValueError(f"Document.from_record(record) -- First sentence is longer than {max_length} tokens: {spans[0][1]}")

        tokens = tokens[:kept[-1][1]]
        keyphrases = [kp for kp in (tokenize(phrase) for phrase in record.keyphrases) if kp]

        return cls(tokens, kept, keyphrases, min(len(title_tokens), len(tokens)), record.id)

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "Document":
        """
        Create a document from a decoded JSON object (output of ``preprocess``).

        :param obj: Decoded JSON object.
        :type obj: dict

        :returns: The corresponding document.
        :rtype: Document

        :raises ValueError: If a field is missing or invalid.
        """
        try:
            tokens = [str(token) for token in obj["tokens"]]
            spans = [(int(start), int(end)) for start, end in obj["sentence_spans"]]
            keyphrases = [[str(token) for token in kp] for kp in obj.get("keyphrases", [])]
            title_length = int(obj.get("title_length", 0))
        except (KeyError, TypeError, ValueError) as error:
            raise ValueError(f"Document.from_json(obj) -- Invalid document: {error!r}")

        record_id = obj.get("id")
        return cls(tokens, spans, keyphrases, title_length, None if record_id is None else str(record_id))

    def to_json(self) -> Dict[str, Any]:
        """
        Translate the document to a JSON-compatible object.

        :returns: Fields of the document.
        :rtype: dict
        """
        return {
            "id": self.id,
            "tokens": self.tokens,
            "sentence_spans": [list(span) for span in self.sentence_spans],
            "keyphrases": self.keyphrases,
            "title_length": self.title_length,
        }

    @property
    def num_sentences(self) -> int:
        return len(self.sentence_spans)

    def sentence(self, i: int) -> List[str]:
        start, end = self.sentence_spans[i]
        return self.tokens[start:end]

    def sentence_of(self, position: int) -> int:
        """
        Index of the sentence containing a token position.

        :param position: Token position.
        :type position: int

        :returns: Sentence index.
        :rtype: int

        :raises ValueError: If the position is outside the document.
        """
        for i, (start, end) in enumerate(self.sentence_spans):
            if start <= position < end:
                return i
        raise ValueError(f"Document.sentence_of(position) -- Position outside the document: {position}")


def find_occurrences(tokens: Sequence[str], phrase: Sequence[str]) -> List[int]:
    """
    Start positions of every contiguous occurrence of a phrase.

    :param tokens: Token sequence searched.
    :type tokens: list[str]
    :param phrase: Phrase searched for.
    :type phrase: list[str]

    :returns: Sorted start positions (empty if the phrase never occurs).
    :rtype: list[int]
    """
    size = len(phrase)
    if size == 0:
        return []
    phrase = list(phrase)
    return [i for i in range(len(tokens) - size + 1) if tokens[i] == phrase[0] and list(tokens[i:i + size]) == phrase]


def format_target(doc: Document, categories: Sequence[KeyphraseCategory]) -> List[str]:
    """
    Build the concatenated target sequence of a document.

    Present keyphrases come first, sorted by first occurrence in the source and
    joined by ``<sep>``, then ``<peos>``, then the absent keyphrases (semi-present
    included) in gold order, then ``<eos>``. ``<peos>`` is emitted even when a
    block is empty.

    :param doc: Tokenized document.
    :type doc: Document
    :param categories: Category of each keyphrase of the document.
    :type categories: list[KeyphraseCategory]

    :returns: Target tokens.
    :rtype: list[str]

    :raises ValueError: If the categories are not aligned with the keyphrases.
    """
    if len(categories) != len(doc.keyphrases):
        raise ValueError(f"format_target(doc, categories) -- Expected {len(doc.keyphrases)} categories, got: {len(categories)}")

    present = []
    absent = []
    for i, (kp, category) in enumerate(zip(doc.keyphrases, categories)):
        if category is KeyphraseCategory.PRESENT:
            occurrences = find_occurrences(doc.tokens, kp)
            first = occurrences[0] if occurrences else len(doc.tokens)
            present.append((first, i, kp))
        else:
            absent.append(kp)

    # Gold order breaks ties between keyphrases starting at the same position
    present = [kp for _, _, kp in sorted(present, key=lambda item: (item[0], item[1]))]

    def join(block: List[List[str]]) -> List[str]:
        out = []
        for j, kp in enumerate(block):
            if j > 0:
                out.append(SEP_TOKEN)
            out.extend(kp)
        return out

    return join(present) + [PEOS_TOKEN] + join(absent) + [EOS_TOKEN]
