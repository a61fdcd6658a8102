import math

import pytest
import torch

from src.model import SentenceSelector, StraightThroughGate, gate_accuracy


@pytest.mark.parametrize("probs,expected", [
    ([0.2, 0.7, 0.5], [0.0, 1.0, 0.0]),
    ([0.5000001, 0.4999999], [1.0, 0.0]),
    ([1.0, 0.0], [1.0, 0.0]),
])
def test_straight_through_forward(probs, expected):
    """
    Test the strict threshold: a probability of exactly 0.5 gives 0.
    """
    probs = torch.tensor(probs, dtype=torch.float64)
    assert StraightThroughGate.apply(probs, 0.5).tolist() == expected


def test_straight_through_backward_is_identity():
    """
    Test that the incoming gradient reaches the probabilities unchanged.
    """
    probs = torch.tensor([0.2, 0.9, 0.5], requires_grad=True)
    upstream = torch.tensor([3.0, -1.0, 0.5])

    StraightThroughGate.apply(probs, 0.5).backward(upstream)

    assert torch.equal(probs.grad, upstream)


def test_sentence_representations_shapes(make_config):
    """
    Test one pooled row per sentence, sentences shorter than the widest window included.
    """
    config = make_config(cnn_kernel_sizes=(1, 3, 5))
    selector = SentenceSelector(config)
    inputs = torch.randn(9, config.embed_dim)
    spans = [(0, 1), (1, 3), (3, 9)]

    reprs, probs = selector(inputs, spans)

    assert reprs.shape == (3, config.cnn_channels * 3)
    assert probs.shape == (3,)
    assert bool(((probs > 0) & (probs < 1)).all())


def test_sentence_representation_depends_on_own_sentence_only(make_config):
    """
    Test that changing the tokens of one sentence leaves the other rows unchanged.
    """
    config = make_config()
    selector = SentenceSelector(config)
    inputs = torch.randn(7, config.embed_dim)
    spans = [(0, 3), (3, 7)]

    before = selector.sentence_representations(inputs, spans)
    changed = inputs.clone()
    changed[4] += 1.0
    after = selector.sentence_representations(changed, spans)

    assert torch.equal(before[0], after[0])
    assert not torch.equal(before[1], after[1])


def test_binarize_override_and_anchor(make_config):
    selector = SentenceSelector(make_config())
    probs = torch.tensor([0.25, 0.75], requires_grad=True)

    forced = selector.binarize(probs, override=[1, 0])
    assert forced.tolist() == [1.0, 0.0]
    assert not forced.requires_grad

    reference = probs.detach().clone()
    anchored = selector.binarize(probs, anchor=(torch.tensor([0.0, 1.0]), reference))
    assert anchored.tolist() == [0.0, 1.0]
    anchored.sum().backward()
    assert probs.grad.tolist() == [1.0, 1.0]


@pytest.mark.parametrize("override", [[1], [1, 2], [0, 0, 1]])
def test_binarize_invalid_override(make_config, override):
    selector = SentenceSelector(make_config())
    with pytest.raises(ValueError):
        selector.binarize(torch.tensor([0.3, 0.8]), override=override)


def test_probabilities_with_chosen_head(make_config):
    """
    Test the MLP head: a zero output vector gives 0.5 everywhere.
    """
    config = make_config()
    selector = SentenceSelector(config)
    reprs = torch.randn(4, config.cnn_channels * len(config.cnn_kernel_sizes))

    with torch.no_grad():
        selector.output_head.weight.zero_()
    assert selector.probabilities(reprs).tolist() == [0.5] * 4

    with torch.no_grad():
        selector.mlp.weight.zero_()
        selector.mlp.bias.fill_(0.5)
        selector.output_head.weight[0, 0] = math.log(0.7 / 0.3) / math.tanh(0.5)
    assert selector.probabilities(reprs).tolist() == pytest.approx([0.7] * 4, abs=1e-6)


@pytest.mark.parametrize("gates,labels,expected", [
    ([[1, 0], [1]], [[1, 0], [0]], 2 / 3),
    ([[1, 1]], [[1, 1]], 1.0),
    ([], [], 0.0),
])
def test_gate_accuracy(gates, labels, expected):
    assert gate_accuracy(gates, labels) == pytest.approx(expected)
