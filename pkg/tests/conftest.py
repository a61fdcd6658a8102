import os
import random
from typing import List

import pytest
import torch

from src.data import Document, LabeledExample, Vocab, build_vocab, label_document
from src.model import ModelConfig

FILLER_WORDS = [f"w{i}" for i in range(24)]
KEY_WORDS = [f"k{i}" for i in range(12)]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long training acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def tiny_model_config(vocab_size: int = 20, **overrides) -> ModelConfig:
    """
    Network small enough for gradient checks.
    """
    values = dict(
        vocab_size=vocab_size,
        embed_dim=8,
        hidden_dim=8,
        cnn_kernel_sizes=(1, 3),
        cnn_channels=4,
        selector_mlp_hidden=6,
        significance_embed_dim=8,
        max_decode_len=12,
    )
    values.update(overrides)
    return ModelConfig(**values)


def planted_documents(num_documents: int, seed: int = 0, num_sentences: int = 4) -> List[Document]:
    """
    Documents of filler sentences where one sentence holds a planted two-word
    present keyphrase and a later one the two words of a semi-present keyphrase.

    The sentences holding a planted keyphrase are the only significant ones.
    """
    rng = random.Random(seed)
    documents = []
    for index in range(num_documents):
        sentences = [[rng.choice(FILLER_WORDS) for _ in range(rng.randint(4, 6))] for _ in range(num_sentences)]

        first, second = rng.sample(KEY_WORDS, 2)
        present_at = rng.randrange(num_sentences)
        position = rng.randrange(len(sentences[present_at]) + 1)
        sentences[present_at][position:position] = [first, second]

        third, fourth = rng.sample([word for word in KEY_WORDS if word not in (first, second)], 2)
        semi_at = rng.choice([i for i in range(num_sentences) if i != present_at])
        sentences[semi_at].insert(0, fourth)
        sentences[semi_at].append(third)

        tokens = []
        spans = []
        for sentence in sentences:
            start = len(tokens)
            tokens.extend(sentence + ["."])
            spans.append((start, len(tokens)))

        documents.append(Document(tokens, spans, [[first, second], [third, fourth]], spans[0][1], f"doc-{index}"))
    return documents


def planted_corpus(num_documents: int, seed: int = 0, num_sentences: int = 4) -> List[LabeledExample]:
    return [label_document(doc) for doc in planted_documents(num_documents, seed, num_sentences)]


@pytest.fixture
def table1_document() -> Document:
    """
    One sentence "a b c d e f g h i j" with a present, a semi-present and an absent keyphrase.
    """
    tokens = list("abcdefghij")
    return Document(tokens, [(0, 10)], [["a", "b", "c"], ["a", "b", "d"], ["x", "y", "z"]], 0, "table-1")


@pytest.fixture
def planted() -> List[LabeledExample]:
    return planted_corpus(8, seed=3)


@pytest.fixture
def planted_vocab(planted) -> Vocab:
    return build_vocab([example.document for example in planted])


@pytest.fixture
def fixture_records_path() -> str:
    return os.path.join(os.path.dirname(__file__), "fixtures", "records.jsonl")


@pytest.fixture(autouse=True)
def seeded():
    torch.manual_seed(0)


@pytest.fixture
def make_config():
    return tiny_model_config


@pytest.fixture
def make_corpus():
    return planted_corpus
