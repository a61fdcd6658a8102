import pytest

from src.data import MatchConfig, dedup_phrases, normalize_phrase


@pytest.mark.parametrize("kp,match_config,expected", [
    (["Neural", "Networks"], MatchConfig(), ("neural", "network")),
    (["<digit>"], MatchConfig(), ("<digit>",)),
    (["Neural", "Networks"], MatchConfig(stemmer="none"), ("neural", "networks")),
    (["Neural", "Networks"], MatchConfig(stemmer="none", lowercase=False), ("Neural", "Networks")),
    ([], MatchConfig(), ()),
])
def test_normalize_phrase(kp, match_config, expected):
    """
    Test lowercasing and stemming, special tokens left untouched.
    """
    assert normalize_phrase(kp, match_config) == expected


def test_match_config_unknown_stemmer():
    with pytest.raises(ValueError):
        MatchConfig(stemmer="lancaster")


def test_dedup_phrases():
    """
    Test that duplicates after normalization are removed, first occurrences kept in their original form.
    """
    kps = [["neural", "networks"], ["deep"], ["neural", "network"], ["Deep"]]

    assert dedup_phrases(kps) == [["neural", "networks"], ["deep"]]
    assert dedup_phrases(kps, MatchConfig(stemmer="none", lowercase=False)) == kps
