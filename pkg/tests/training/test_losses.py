import math

import pytest
import torch

from src.data import encode_example
from src.model import KeyphraseGenerator
from src.training import bce_loss, mle_loss, total_loss


@pytest.mark.parametrize("step_logps,expected", [
    ([0.0, 0.0, 0.0], 0.0),
    ([-math.log(50)] * 3, 3 * math.log(50)),
    ([-2.0], 2.0),
])
def test_mle_loss(step_logps, expected):
    """
    Test the negative log-likelihood summed over steps.
    """
    loss = mle_loss(torch.tensor(step_logps, dtype=torch.float64))
    assert float(loss) == pytest.approx(expected)


def test_mle_loss_uniform_over_fifty():
    assert float(mle_loss(torch.log(torch.full((3,), 1 / 50, dtype=torch.float64)))) == pytest.approx(11.736, abs=1e-3)


def test_mle_loss_batch_mean():
    loss = mle_loss([torch.tensor([-1.0, -2.0]), torch.tensor([-4.0])])
    assert float(loss) == pytest.approx(3.5)


@pytest.mark.parametrize("step_logps", [[], [torch.tensor([])], [torch.tensor([-1.0]), torch.tensor([])]])
def test_mle_loss_empty(step_logps):
    with pytest.raises(ValueError):
        mle_loss(step_logps)


@pytest.mark.parametrize("probs,labels,expected", [
    ([1.0, 0.0], [1, 0], 0.0),
    ([0.5, 0.5, 0.5], [1, 0, 1], 3 * math.log(2)),
    ([math.e / (1 + math.e)], [1], math.log(1 + math.e) - 1),
])
def test_bce_loss(probs, labels, expected):
    """
    Test the binary cross-entropy summed over sentences, probabilities clamped away from 0 and 1.
    """
    loss = bce_loss(torch.tensor(probs, dtype=torch.float64), torch.tensor(labels))
    assert float(loss) == pytest.approx(expected, abs=1e-6)


def test_bce_loss_is_finite_at_wrong_extremes():
    loss = bce_loss(torch.tensor([0.0, 1.0], dtype=torch.float64), torch.tensor([1, 0]))
    assert float(loss) == pytest.approx(-2 * math.log(1e-7), rel=1e-6)


def test_bce_loss_batch_mean():
    loss = bce_loss([torch.tensor([0.5]), torch.tensor([0.5, 0.5, 0.5])], [torch.tensor([1]), torch.tensor([0, 0, 1])])
    assert float(loss) == pytest.approx(2 * math.log(2))


@pytest.mark.parametrize("probs,labels", [
    (torch.tensor([0.5, 0.5]), torch.tensor([1])),
    ([torch.tensor([0.5])], []),
    ([], []),
])
def test_bce_loss_misaligned(probs, labels):
    with pytest.raises(ValueError):
        bce_loss(probs, labels)


@pytest.mark.parametrize("mle,bce,lambda_bce,expected", [
    (2.0, 5.0, 0.08, 2.4),
    (2.0, 5.0, 0.0, 2.0),
    (1.5, 0.0, 1.0, 1.5),
])
def test_total_loss(mle, bce, lambda_bce, expected):
    assert float(total_loss(torch.tensor(mle), torch.tensor(bce), lambda_bce)) == pytest.approx(expected)


def test_total_loss_negative_lambda():
    with pytest.raises(ValueError):
        total_loss(torch.tensor(1.0), torch.tensor(1.0), -0.1)


def test_label_loss_alone_decreases(planted, planted_vocab, make_config):
    """
    Test that small gradient steps on the sentence-label loss alone decrease it at every step.
    """
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab))).double()
    examples = [encode_example(labeled.document, planted_vocab, labeled.categories) for labeled in planted]
    labels = [torch.tensor(labeled.sentence_labels, dtype=torch.float64) for labeled in planted]
    optimizer = torch.optim.SGD(model.parameters(), lr=0.01)

    losses = []
    for _ in range(15):
        loss = bce_loss([model.encode(example).probs for example in examples], labels)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        losses.append(float(loss))

    assert all(later < earlier for earlier, later in zip(losses, losses[1:]))
