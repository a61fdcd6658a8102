import math

import pytest
import torch

from src.model import AdditiveAttention, CopyDecoder


@pytest.fixture
def identity_attention():
    """
    Attention whose score of row F_j is tanh(F_j[0]).
    """
    attention = AdditiveAttention(2)
    with torch.no_grad():
        attention.encoder_proj.weight.copy_(torch.eye(2))
        attention.decoder_proj.weight.zero_()
        attention.decoder_proj.bias.zero_()
        attention.v.weight.copy_(torch.tensor([[1.0, 0.0]]))
    return attention


def test_attention_single_position(identity_attention):
    fused = torch.tensor([[0.3, -1.2]])
    context, weights = identity_attention(fused, torch.zeros(2))

    assert weights.tolist() == [1.0]
    assert torch.equal(context, fused[0])


def test_attention_identical_rows(identity_attention):
    fused = torch.tensor([[0.3, -1.2]] * 4)
    _, weights = identity_attention(fused, torch.randn(2))

    assert weights.tolist() == pytest.approx([0.25] * 4)


def test_attention_softmax_by_hand(identity_attention):
    """
    Test that scores [ln 2, 0] give weights [2/3, 1/3].
    """
    fused = torch.tensor([[math.atanh(math.log(2)), 0.0], [0.0, 0.0]], dtype=torch.float64)
    identity_attention.double()

    scores = identity_attention.score(fused, torch.zeros(2, dtype=torch.float64))
    _, weights = identity_attention(fused, torch.zeros(2, dtype=torch.float64))

    assert scores.tolist() == pytest.approx([math.log(2), 0.0])
    assert weights.tolist() == pytest.approx([2 / 3, 1 / 3])


@pytest.fixture
def decoder(make_config):
    return CopyDecoder(make_config(vocab_size=20))


def step(decoder, source_extended_ids, num_oov):
    torch.manual_seed(1)
    d = decoder.config.hidden_dim
    fused = torch.randn(len(source_extended_ids), d)
    return decoder(
        torch.randn(decoder.config.embed_dim),
        torch.randn(d),
        fused,
        torch.tensor(source_extended_ids),
        num_oov,
    )


def test_distribution_sums_to_one(decoder):
    state, probs, weights, context = step(decoder, [7, 20, 3, 21, 20], 2)

    assert probs.shape == (22,)
    assert float(probs.sum()) == pytest.approx(1.0, abs=1e-6)
    assert float(weights.sum()) == pytest.approx(1.0, abs=1e-6)
    assert bool((probs >= 0).all())
    assert state.shape == context.shape == (decoder.config.hidden_dim,)


def test_repeated_oov_aggregates_copy_scores(decoder):
    """
    Test that the two positions of an OOV token add up into its single extended entry.
    """
    _, merged, _, _ = step(decoder, [20, 9, 20], 1)
    _, split, _, _ = step(decoder, [20, 9, 21], 2)

    assert float(merged[20]) == pytest.approx(float(split[20] + split[21]), rel=1e-6)
    assert torch.allclose(merged[:20], split[:20])
    assert float(merged[20]) > 0


def test_copy_adds_to_in_vocabulary_tokens(decoder):
    """
    Test that only tokens of the source receive copy mass.
    """
    _, with_source, _, _ = step(decoder, [9, 9, 9], 0)
    _, other_source, _, _ = step(decoder, [11, 11, 11], 0)

    # Same generation logits and copy scores, only the destination of the copy mass differs
    assert float(with_source[9]) > float(other_source[9])
    assert float(with_source[11]) < float(other_source[11])
    others = [i for i in range(20) if i not in (9, 11)]
    assert torch.allclose(with_source[others], other_source[others])


def test_copy_disabled(make_config):
    decoder = CopyDecoder(make_config(vocab_size=20, copy_attention=False))
    _, probs, _, _ = step(decoder, [20, 9, 21], 2)

    assert decoder.copy_proj is None
    assert probs[20:].tolist() == [0.0, 0.0]
    assert float(probs.sum()) == pytest.approx(1.0, abs=1e-6)
