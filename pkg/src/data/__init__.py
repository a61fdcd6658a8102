from .document import Document, KeyphraseCategory, RawRecord, find_occurrences, format_target
from .jsonl import read_jsonl, write_jsonl
from .labeling import CorpusStats, LabeledExample, classify_keyphrase, corpus_stats, label_document, weak_labels
from .phrases import MatchConfig, dedup_phrases, normalize_phrase
from .tokenizer import split_sentences, tokenize
from .vocab import TokenizedExample, Vocab, build_vocab, decode_ids, encode_example

__all__ = [
    "build_vocab",
    "classify_keyphrase",
    "corpus_stats",
    "CorpusStats",
    "decode_ids",
    "dedup_phrases",
    "Document",
    "encode_example",
    "find_occurrences",
    "format_target",
    "KeyphraseCategory",
    "label_document",
    "LabeledExample",
    "MatchConfig",
    "normalize_phrase",
    "RawRecord",
    "read_jsonl",
    "split_sentences",
    "tokenize",
    "TokenizedExample",
    "Vocab",
    "weak_labels",
    "write_jsonl"
    ]
