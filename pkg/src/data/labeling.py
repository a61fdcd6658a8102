"""
labeling.py
===========

This module classifies gold keyphrases and derives weak sentence labels.

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

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Set, Tuple

import numpy as np

from .document import Document, KeyphraseCategory, find_occurrences


@dataclass
class LabeledExample:
    """
    Stores a document with its keyphrase categories and weak sentence labels.

    :ivar document: Tokenized document.
    :vartype document: Document
    :ivar categories: Category of each keyphrase.
    :vartype categories: list[KeyphraseCategory]
    :ivar sentence_labels: Weak label of each sentence (1 for significant).
    :vartype sentence_labels: list[int]
    :ivar supporting_sentences: Sentences justifying each keyphrase's category.
    :vartype supporting_sentences: list[list[int]]
    """
    document: Document
    categories: List[KeyphraseCategory]
    sentence_labels: List[int]
    supporting_sentences: List[List[int]]

    def __post_init__(self):
        if len(self.sentence_labels) != self.document.num_sentences:
            raise ValueError(f"LabeledExample(sentence_labels) -- Expected {self.document.num_sentences} labels, got: {len(self.sentence_labels)}")
        if len(self.categories) != len(self.document.keyphrases):
            raise ValueError(f"LabeledExample(categories) -- Expected {len(self.document.keyphrases)} categories, got: {len(self.categories)}")

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "LabeledExample":
        """
        Create a labeled example from a decoded JSON object (output of ``label``).

        :param obj: Decoded JSON object.
        :type obj: dict

        :returns: The labeled example.
        :rtype: LabeledExample

        :raises ValueError: If a field is missing or invalid.
        """
        document = Document.from_json(obj)
        try:
            categories = [KeyphraseCategory(category) for category in obj["categories"]]
            sentence_labels = [int(label) for label in obj["sentence_labels"]]
            supporting = [[int(i) for i in sentences] for sentences in obj["supporting_sentences"]]
        except (KeyError, TypeError, ValueError) as error:
            raise ValueError(f"LabeledExample.from_json(obj) -- Invalid labels: {error!r}")
        return cls(document, categories, sentence_labels, supporting)

    def to_json(self) -> Dict[str, Any]:
        out = self.document.to_json()
        out["categories"] = [category.value for category in self.categories]
        out["sentence_labels"] = self.sentence_labels
        out["supporting_sentences"] = self.supporting_sentences
        return out


def classify_keyphrase(doc: Document, kp: Sequence[str]) -> Tuple[KeyphraseCategory, Set[int]]:
    """
    Classify a keyphrase as present, semi-present or absent.

    A keyphrase is present when it is a contiguous subsequence of the source,
    semi-present when it is not but a single sentence contains all its words
    (set containment), absent otherwise.

    :param doc: Tokenized document.
    :type doc: Document
    :param kp: Keyphrase tokens.
    :type kp: list[str]

    :returns:
        - The category of the keyphrase.
        - The sentences supporting it: for present, every sentence overlapped by
          a contiguous match; for semi-present, every sentence containing all the words.
    :rtype: tuple[KeyphraseCategory, set[int]]

    :raises ValueError: If the keyphrase is empty.
    """
    if len(kp) == 0:
        raise ValueError("classify_keyphrase(doc, kp) -- The keyphrase is empty")

    occurrences = find_occurrences(doc.tokens, kp)
    if occurrences:
        supporting = set()
        for start in occurrences:
            first = doc.sentence_of(start)
            last = doc.sentence_of(start + len(kp) - 1)
            supporting.update(range(first, last + 1))
        return KeyphraseCategory.PRESENT, supporting

    words = set(kp)
    supporting = {i for i in range(doc.num_sentences) if words <= set(doc.sentence(i))}
    if supporting:
        return KeyphraseCategory.SEMI_PRESENT, supporting

    return KeyphraseCategory.ABSENT_OTHER, set()


def weak_labels(doc: Document, kps: Iterable[Sequence[str]]) -> List[int]:
    """
    Weak significance label of each sentence.

    A sentence is significant (1) when it supports a present or semi-present keyphrase.

    :param doc: Tokenized document.
    :type doc: Document
    :param kps: Keyphrases.
    :type kps: Iterable[list[str]]

    :returns: One label in {0, 1} per sentence.
    :rtype: list[int]
    """
    significant = set()
    for kp in kps:
        if len(kp) == 0:
            continue
        _, supporting = classify_keyphrase(doc, kp)
        significant.update(supporting)
    return [int(i in significant) for i in range(doc.num_sentences)]


def label_document(doc: Document) -> LabeledExample:
    """
    Classify every keyphrase of a document and derive its sentence labels.

    :param doc: Tokenized document.
    :type doc: Document

    :returns: The labeled example.
    :rtype: LabeledExample
    """
    categories = []
    supporting = []
    significant = set()
    for kp in doc.keyphrases:
        category, sentences = classify_keyphrase(doc, kp)
        categories.append(category)
        supporting.append(sorted(sentences))
        significant.update(sentences)

    labels = [int(i in significant) for i in range(doc.num_sentences)]
    return LabeledExample(doc, categories, labels, supporting)


@dataclass
class CorpusStats:
    """
    Sentence and keyphrase statistics of a labeled corpus.

    :ivar num_documents: Number of documents.
    :ivar mean_sentences: Mean number of sentences per document.
    :ivar mean_significant_sentences: Mean number of significant sentences per document.
    :ivar significant_fraction: Mean over documents of the significant share of sentences.
    :ivar pooled_significant_fraction: Significant sentences over all sentences.
    :ivar num_present: Number of present keyphrases.
    :ivar num_semi_present: Number of semi-present keyphrases.
    :ivar num_absent_other: Number of absent keyphrases that are not semi-present.
    :ivar semi_present_share: Share of absent keyphrases that are semi-present.
    :ivar title_present_fraction: Share of present keyphrases occurring in the title.
    """
    num_documents: int
    mean_sentences: float
    mean_significant_sentences: float
    significant_fraction: float
    pooled_significant_fraction: float
    num_present: int
    num_semi_present: int
    num_absent_other: int
    semi_present_share: float
    title_present_fraction: float

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def corpus_stats(dataset: Sequence[LabeledExample]) -> CorpusStats:
    """
    Compute sentence and keyphrase statistics of a labeled corpus.

    :param dataset: Labeled examples.
    :type dataset: list[LabeledExample]

    :returns: The statistics (shares are 0.0 when their denominator is empty).
    :rtype: CorpusStats

    :raises ValueError: If the dataset is empty.
    """
    if len(dataset) == 0:
        raise ValueError("corpus_stats(dataset) -- The dataset is empty")

    sentences = np.array([example.document.num_sentences for example in dataset], dtype=float)
    significant = np.array([sum(example.sentence_labels) for example in dataset], dtype=float)
    ratios = np.divide(significant, sentences, out=np.zeros_like(significant), where=sentences > 0)

    counts = {category: 0 for category in KeyphraseCategory}
    in_title = 0
    for example in dataset:
        doc = example.document
        for kp, category in zip(doc.keyphrases, example.categories):
            counts[category] += 1
            if category is KeyphraseCategory.PRESENT:
                occurrences = find_occurrences(doc.tokens, kp)
                in_title += any(start + len(kp) <= doc.title_length for start in occurrences)

    num_absent = counts[KeyphraseCategory.SEMI_PRESENT] + counts[KeyphraseCategory.ABSENT_OTHER]
    num_present = counts[KeyphraseCategory.PRESENT]

    return CorpusStats(
        num_documents=len(dataset),
        mean_sentences=float(sentences.mean()),
        mean_significant_sentences=float(significant.mean()),
        significant_fraction=float(ratios.mean()),
        pooled_significant_fraction=float(significant.sum() / sentences.sum()) if sentences.sum() > 0 else 0.0,
        num_present=num_present,
        num_semi_present=counts[KeyphraseCategory.SEMI_PRESENT],
        num_absent_other=counts[KeyphraseCategory.ABSENT_OTHER],
        semi_present_share=counts[KeyphraseCategory.SEMI_PRESENT] / num_absent if num_absent else 0.0,
        title_present_fraction=in_title / num_present if num_present else 0.0,
    )
