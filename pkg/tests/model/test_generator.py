import math

import pytest
import torch

from src.data import Document, MatchConfig, Vocab, decode_ids, encode_example
from src.model import KeyphraseGenerator, Prediction, split_decoded


@pytest.mark.parametrize("tokens,present,absent", [
    (["y1", "<peos>", "<eos>"], [["y1"]], []),
    (["a", "<sep>", "a", "<peos>", "<eos>"], [["a"]], []),
    (["a", "b", "<sep>", "c", "<peos>", "d", "<sep>", "e", "f", "<eos>", "g"], [["a", "b"], ["c"]], [["d"], ["e", "f"]]),
    (["<peos>", "a", "<peos>", "b"], [], [["a"], ["b"]]),
    (["a", "<sep>", "<sep>", "<unk>", "<peos>", "a", "<sep>", "b"], [["a"]], [["b"]]),
    (["<digit>", "layers", "<peos>"], [["<digit>", "layers"]], []),
    (["neural", "<unk>", "<sep>", "model", "<peos>", "<unk>", "net"], [["model"]], []),
    (["networks", "<sep>", "network"], [["networks"]], []),
    ([], [], []),
])
def test_split_decoded(tokens, present, absent):
    """
    Test the block split, separators, dropped specials and duplicate removal.
    """
    assert split_decoded(tokens) == (present, absent)


def test_split_decoded_renders_copied_oov():
    vocab = Vocab(["y1"])
    tokens = decode_ids([len(vocab), vocab.peos_id, vocab.eos_id], vocab, ["foo"])

    assert split_decoded(tokens) == ([["foo"]], [])


def test_split_decoded_without_stemming():
    assert split_decoded(["networks", "<sep>", "network"], MatchConfig(stemmer="none")) == ([["networks"], ["network"]], [])


@pytest.fixture
def labeled(planted):
    return planted[0]


def test_attend(labeled, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    encoded = model.encode(encode_example(labeled.document, planted_vocab))

    context, weights = model.attend(encoded.fused, encoded.summary)

    assert weights.shape == (len(labeled.document.tokens),)
    assert float(weights.sum()) == pytest.approx(1.0, abs=1e-5)
    assert torch.allclose(context, weights @ encoded.fused)


def test_forward_loss_path_shape(labeled, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    example = encode_example(labeled.document, planted_vocab, labeled.categories)

    logps, probs = model.forward_loss_path(example)

    assert logps.shape == (len(example.target_ids),)
    assert bool((logps <= 0).all())
    assert probs.shape == (labeled.document.num_sentences,)


def test_uniform_head_gives_log_vocab_size(labeled, planted_vocab, make_config):
    """
    Test that a zero output layer without copy scores every target token at -ln V.
    """
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab), copy_attention=False))
    with torch.no_grad():
        model.decoder.output.weight.zero_()
        model.decoder.output.bias.zero_()
    example = encode_example(labeled.document, planted_vocab, labeled.categories)

    logps, _ = model.forward_loss_path(example)

    assert logps.tolist() == pytest.approx([-math.log(len(planted_vocab))] * len(example.target_ids), abs=1e-5)


def test_forward_loss_path_needs_target(labeled, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    with pytest.raises(ValueError):
        model.forward_loss_path(encode_example(labeled.document, planted_vocab))


def test_distributions_are_normalized(make_corpus, make_config):
    """
    Test that output distributions and attention rows sum to 1 across 100 random forward passes.
    """
    corpus = make_corpus(10, seed=11)
    vocab = Vocab(sorted({token for example in corpus for token in example.document.tokens})[:15])

    for i in range(100):
        torch.manual_seed(i)
        model = KeyphraseGenerator(make_config(vocab_size=len(vocab), copy_attention=i % 4 != 0)).double()
        model.initialize(0.1 + 0.02 * (i % 10))
        labeled = corpus[i % len(corpus)]
        example = encode_example(labeled.document, vocab, labeled.categories)

        with torch.no_grad():
            encoded = model.encode(example)
            decode_state = model.init_decode(encoded)
            prev_id = vocab.bos_id
            for target_id in example.target_ids[:4]:
                decode_state, probs, weights = model.decode_step(prev_id, decode_state, encoded.fused, example)
                assert probs.shape == (len(vocab) + len(example.oov_tokens),)
                assert float(probs.sum()) == pytest.approx(1.0, abs=1e-6)
                assert float(weights.sum()) == pytest.approx(1.0, abs=1e-6)
                prev_id = target_id


def test_copy_path_reaches_source_oov(labeled, planted_vocab, make_config):
    """
    Test that a target token missing from the vocabulary but present in the source
    gets non-zero probability through copying only.
    """
    keywords = {token for kp in labeled.document.keyphrases for token in kp}
    vocab = Vocab([token for token in planted_vocab.regular_tokens if token not in keywords])
    example = encode_example(labeled.document, vocab, labeled.categories)
    first_present = example.target_ids[0]
    assert first_present >= len(vocab)

    copying = KeyphraseGenerator(make_config(vocab_size=len(vocab)))
    logps, _ = copying.forward_loss_path(example)
    assert float(logps[0]) > -50.0

    torch.manual_seed(0)
    generating = KeyphraseGenerator(make_config(vocab_size=len(vocab), copy_attention=False))
    logps, _ = generating.forward_loss_path(example)
    assert float(logps[0]) == pytest.approx(math.log(torch.finfo(torch.float32).tiny))


def test_greedy_decode_emits_copied_oov(make_config):
    """
    Test that an OOV source token is rendered when copying dominates generation.
    """
    vocab = Vocab(["a"])
    model = KeyphraseGenerator(make_config(vocab_size=len(vocab)))
    with torch.no_grad():
        model.decoder.output.bias.fill_(-100.0)
    example = encode_example(Document(["foo"], [(0, 1)]), vocab)

    prediction = model.greedy_decode(example, vocab, max_len=3)

    assert prediction.output_ids == [len(vocab)] * 3
    assert prediction.present == [["foo", "foo", "foo"]]
    assert prediction.absent == []


def test_greedy_decode(labeled, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    example = encode_example(labeled.document, planted_vocab)

    prediction = model.greedy_decode(example, planted_vocab)

    assert isinstance(prediction, Prediction)
    assert len(prediction.output_ids) <= model.config.max_decode_len
    assert planted_vocab.eos_id not in prediction.output_ids
    assert len(prediction.attention) in (len(prediction.output_ids), len(prediction.output_ids) + 1)
    for row in prediction.attention:
        assert sum(row) == pytest.approx(1.0, abs=1e-5)
    assert prediction.gates == [int(p > 0.5) for p in prediction.probs]
    assert set(prediction.to_json()) == {"present", "absent", "probs", "gates"}


def test_greedy_decode_with_override(labeled, planted_vocab, make_config):
    model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
    example = encode_example(labeled.document, planted_vocab)
    forced = [1] * labeled.document.num_sentences

    assert model.greedy_decode(example, planted_vocab, gate_override=forced).gates == forced


def test_greedy_decode_is_deterministic(labeled, planted_vocab, make_config):
    """
    Test that identical seeds give identical probabilities, gates and predictions.
    """
    example = encode_example(labeled.document, planted_vocab)
    predictions = []
    for _ in range(2):
        torch.manual_seed(5)
        model = KeyphraseGenerator(make_config(vocab_size=len(planted_vocab)))
        predictions.append(model.greedy_decode(example, planted_vocab))

    assert predictions[0] == predictions[1]
