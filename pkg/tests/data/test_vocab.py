from collections import Counter

import pytest

from src.data import Document, KeyphraseCategory, Vocab, build_vocab, decode_ids, encode_example
from src.data.constants import SPECIAL_TOKENS


def doc_of(tokens, keyphrases=()):
    return Document(list(tokens), [(0, len(tokens))], [list(kp) for kp in keyphrases])


@pytest.mark.parametrize("tokens,max_size,expected", [
    (["a", "a", "b"], 1, ["a"]),
    (["b", "a"], 1, ["a"]),
    (["a", "b"], 0, []),
    (["c", "b", "b", "a"], 3, ["b", "a", "c"]),
])
def test_build_vocab(tokens, max_size, expected):
    """
    Test frequency ranking, lexicographic ties and the size limit.
    """
    vocab = build_vocab([doc_of(tokens)], max_size)

    assert vocab.itos[:len(SPECIAL_TOKENS)] == list(SPECIAL_TOKENS)
    assert vocab.regular_tokens == expected


def test_build_vocab_empty():
    with pytest.raises(ValueError):
        build_vocab([])


def test_vocab_special_ids():
    vocab = Vocab(["x"])

    assert (vocab.pad_id, vocab.unk_id, vocab.bos_id, vocab.eos_id, vocab.sep_id, vocab.peos_id, vocab.digit_id) == tuple(range(7))
    assert vocab.id_of("x") == 7
    assert vocab.id_of("missing") == vocab.unk_id


def test_vocab_rejects_duplicates():
    with pytest.raises(ValueError):
        Vocab(["a", "a"])
    with pytest.raises(ValueError):
        Vocab(["<eos>"])


def test_vocab_save_load(tmp_path):
    vocab = Vocab.from_counter(Counter({"a": 3, "b": 2}))
    path = str(tmp_path / "vocab.json")
    vocab.save(path)

    assert Vocab.load(path) == vocab


def test_vocab_load_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        Vocab.load(str(tmp_path / "missing.json"))


def test_encode_example_oov():
    """
    Test extended ids of OOV source tokens and of copyable target tokens.
    """
    vocab = Vocab(["a"])
    size = len(vocab)
    doc = doc_of(["foo", "a", "bar", "foo", "."], [["foo"], ["a"], ["zzz"]])
    categories = [KeyphraseCategory.PRESENT, KeyphraseCategory.PRESENT, KeyphraseCategory.ABSENT_OTHER]

    example = encode_example(doc, vocab, categories)

    assert example.oov_tokens == ["foo", "bar", "."]
    assert example.source_ids == [vocab.unk_id, vocab.stoi["a"], vocab.unk_id, vocab.unk_id, vocab.unk_id]
    assert example.source_extended_ids == [size, vocab.stoi["a"], size + 1, size, size + 2]
    assert example.target_ids == [size, vocab.sep_id, vocab.stoi["a"], vocab.peos_id, vocab.unk_id, vocab.eos_id]
    assert all(i < size + len(example.oov_tokens) for i in example.target_ids)


def test_encode_example_without_target():
    example = encode_example(doc_of(["a", "."]), Vocab(["a"]))
    assert example.target_ids == []
    assert example.source_length == 2


def test_decode_ids_roundtrip(planted, planted_vocab):
    """
    Test that the source is rendered back exactly through the extended vocabulary.
    """
    small = Vocab(planted_vocab.regular_tokens[:5])
    for labeled in planted:
        example = encode_example(labeled.document, small, labeled.categories)
        assert decode_ids(example.source_extended_ids, small, example.oov_tokens) == labeled.document.tokens


def test_token_of_outside_range():
    with pytest.raises(ValueError):
        Vocab(["a"]).token_of(99)
