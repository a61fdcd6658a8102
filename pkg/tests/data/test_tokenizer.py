import pytest
from hypothesis import given, strategies as st

from src.data import split_sentences, tokenize


@pytest.mark.parametrize("text,expected", [
    ("We use 25 filters.", ["we", "use", "<digit>", "filters", "."]),
    ("", []),
    ("e.g. CNNs", ["e.g.", "cnns"]),
    ("i.e. a test", ["i.e.", "a", "test"]),
    ("Accuracy of 93.5 percent", ["accuracy", "of", "<digit>", "percent"]),
    ("IPv4 networks", ["ipv4", "networks"]),
    ("graph-based (GB) ranking", ["graph", "-", "based", "(", "gb", ")", "ranking"]),
    ("Version 2.0.1 released.", ["version", "<digit>", "released", "."]),
])
def test_tokenize(text, expected):
    """
    Test lowercasing, digit folding, punctuation isolation and abbreviations.
    """
    assert tokenize(text) == expected


@given(st.text(alphabet="abcXYZ019 .,;-e.gi", max_size=60))
def test_tokenize_idempotent(text):
    """
    Test that tokenizing the joined tokens gives the same tokens back.
    """
    tokens = tokenize(text)
    assert tokenize(" ".join(tokens)) == tokens


@pytest.mark.parametrize("tokens,expected", [
    (["a", "b", ".", "c", "d"], [(0, 3), (3, 5)]),
    (["a", "e.g.", "b", ".", "c"], [(0, 4), (4, 5)]),
    (["a", "b", "c"], [(0, 3)]),
    ([], []),
    ([".", "."], [(0, 1), (1, 2)]),
    (["why", "?", "so", "!", "b", "."], [(0, 6)]),
])
def test_split_sentences(tokens, expected):
    """
    Test sentence boundaries after every "." token.
    """
    assert split_sentences(tokens) == expected


@given(st.lists(st.sampled_from(["a", "b", ".", "e.g.", "i.e.", "<digit>"]), max_size=40))
def test_split_sentences_partition(tokens):
    """
    Test that the spans partition the tokens and no "." is interior to a span.
    """
    spans = split_sentences(tokens)

    position = 0
    for start, end in spans:
        assert start == position
        assert end > start
        assert "." not in tokens[start:end - 1]
        position = end
    assert position == len(tokens)
