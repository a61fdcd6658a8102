import math

import pytest
import torch

from src.data import Document, Vocab, encode_example
from src.model import KeyphraseGenerator


@pytest.fixture
def example_and_model(planted, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    example = encode_example(planted[0].document, planted_vocab, planted[0].categories)
    return example, model


def test_encode_shapes(example_and_model):
    example, model = example_and_model
    encoded = model.encode(example)
    num_sentences = len(example.sentence_spans)
    d = model.config.hidden_dim

    assert encoded.hidden.shape == (example.source_length, d)
    assert encoded.fused.shape == (example.source_length, d)
    assert encoded.summary.shape == (d,)
    assert encoded.probs.shape == (num_sentences,)
    assert set(encoded.gates.tolist()) <= {0.0, 1.0}
    assert encoded.token_gates.shape == (example.source_length,)


def test_gate_effect_is_exact(example_and_model):
    """
    Test that F = H + D[z] row by row, and that flipping one sentence's gate moves
    exactly its rows by D[1] - D[0] and no other row.
    """
    example, model = example_and_model
    spans = example.sentence_spans
    table = model.encoder.significance.detach()
    base = [0] * len(spans)

    for i, (start, end) in enumerate(spans):
        flipped = list(base)
        flipped[i] = 1
        off = model.encode(example, gate_override=base)
        on = model.encode(example, gate_override=flipped)

        for encoded, gates in ((off, base), (on, flipped)):
            assert torch.equal(encoded.fused, encoded.hidden + encoded.significance)
            for j, (s, e) in enumerate(spans):
                assert torch.equal(encoded.significance[s:e], table[gates[j]].expand(e - s, -1))

        assert torch.equal(on.hidden, off.hidden)
        difference = on.fused - off.fused
        assert torch.allclose(difference[start:end], (table[1] - table[0]).expand(end - start, -1), atol=1e-6)
        outside = torch.ones(example.source_length, dtype=torch.bool)
        outside[start:end] = False
        assert torch.equal(on.fused[outside], off.fused[outside])


def test_zero_output_head_closes_every_gate(example_and_model):
    """
    Test that a zero selector head gives probability 0.5, hence gate 0, for every sentence.
    """
    example, model = example_and_model
    with torch.no_grad():
        model.encoder.selector.output_head.weight.zero_()

    encoded = model.encode(example)

    assert encoded.probs.tolist() == [0.5] * len(example.sentence_spans)
    assert encoded.gates.tolist() == [0.0] * len(example.sentence_spans)


def test_single_sentence_open_gate(make_config):
    """
    Test that a one-sentence document with probability 0.7 adds D[1] to every token.
    """
    vocab = Vocab(["a", "b", "c"])
    model = KeyphraseGenerator(make_config(vocab_size=len(vocab)))
    selector = model.encoder.selector
    with torch.no_grad():
        selector.mlp.weight.zero_()
        selector.mlp.bias.fill_(0.5)
        selector.output_head.weight.zero_()
        selector.output_head.weight[0, 0] = math.log(0.7 / 0.3) / math.tanh(0.5)

    example = encode_example(Document(["a", "b", "c", "."], [(0, 4)]), vocab)
    encoded = model.encode(example)

    assert encoded.probs.tolist() == pytest.approx([0.7], abs=1e-6)
    assert encoded.gates.tolist() == [1.0]
    expected = model.encoder.significance[1].detach().expand(4, -1)
    assert torch.equal(encoded.significance, expected)


def test_encoder_without_selector(example_and_model, make_config, planted_vocab):
    example, _ = example_and_model
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab), use_selector=False))

    encoded = model.encode(example)

    assert model.encoder.selector is None
    assert torch.equal(encoded.fused, encoded.hidden)
    assert encoded.probs.numel() == 0


@pytest.mark.parametrize("overrides", [
    {"encoder_type": "lstm"},
    {"selector_input": "hidden"},
    {"encoder_type": "lstm", "selector_input": "hidden"},
])
def test_encoder_variants(example_and_model, make_config, planted_vocab, overrides):
    """
    Test the LSTM encoder and the selector reading encoder states.
    """
    example, _ = example_and_model
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab), **overrides))

    encoded = model.encode(example)

    assert encoded.fused.shape == (example.source_length, model.config.hidden_dim)
    assert encoded.probs.shape == (len(example.sentence_spans),)


def test_encode_empty_source(make_config):
    example = encode_example(Document(["a"], [(0, 1)]), Vocab(["a"]))
    example.source_ids = []
    with pytest.raises(ValueError):
        KeyphraseGenerator(make_config(vocab_size=8)).encode(example)


def test_encode_is_deterministic(example_and_model):
    example, model = example_and_model
    first = model.encode(example)
    second = model.encode(example)

    assert torch.equal(first.probs, second.probs)
    assert torch.equal(first.fused, second.fused)
