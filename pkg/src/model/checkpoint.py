"""
checkpoint.py
=============

This module saves and restores trained generators.

Modules
-------
checkpoint
    Handle checkpoint files.
config
    Handle the network hyperparameters.
generator
    Handle encoding, teacher-forced scoring and greedy decoding of examples.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import torch

from ..data import Vocab
from .config import ModelConfig
from .constants import CHECKPOINT_FORMAT_VERSION
from .generator import KeyphraseGenerator

logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    """
    Content of a checkpoint file.

    :ivar model: The generator, weights loaded.
    :ivar vocab: The vocabulary the generator was trained with.
    :ivar train_state: Optimizer state, counters and RNG state saved by the trainer.
    """
    model: KeyphraseGenerator
    vocab: Vocab
    train_state: Dict[str, Any] = field(default_factory=dict)


def save_checkpoint(path: str, model: KeyphraseGenerator, vocab: Vocab, train_state: Optional[Dict[str, Any]] = None):
    """
    Write a checkpoint.

    :param path: Output path.
    :type path: str
    :param model: Generator to save.
    :type model: KeyphraseGenerator
    :param vocab: Vocabulary of the generator.
    :type vocab: Vocab
    :param train_state: Extra training state (optimizer, counters, RNG).
    :type train_state: dict, optional

    :raises ValueError: If the vocabulary size differs from the model's.
    """
    if len(vocab) != model.config.vocab_size:
        raise ValueError(f"save_checkpoint(vocab) -- Vocabulary size {len(vocab)} differs from the model's: {model.config.vocab_size}")

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    torch.save({
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "model_config": model.config.to_json(),
        "vocab": vocab.regular_tokens,
        "state_dict": model.state_dict(),
        "train_state": train_state or {},
    }, path)
    logger.debug("checkpoint saved path=%s", path)


def load_checkpoint(path: str) -> Checkpoint:
    """
    Read a checkpoint written by :func:`save_checkpoint`.

    :param path: Checkpoint path.
    :type path: str

    :returns: The restored generator, vocabulary and training state.
    :rtype: Checkpoint

    :raises FileNotFoundError: If the file does not exist.
    :raises ValueError: If the format version is unknown or a tensor shape does not match the config.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"The specified checkpoint file was not found: '{path}'")

    payload = torch.load(path, map_location="cpu", weights_only=True)
    version = payload.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise ValueError(f"load_checkpoint(path) -- Unsupported checkpoint version: {version}")

    config = ModelConfig.from_json(payload["model_config"])
    vocab = Vocab(payload["vocab"])
    if len(vocab) != config.vocab_size:
        raise ValueError(f"load_checkpoint(path) -- Vocabulary size {len(vocab)} differs from the config's: {config.vocab_size}")

    model = KeyphraseGenerator(config)
    expected = model.state_dict()
    state_dict = payload["state_dict"]

    missing = sorted(set(expected) - set(state_dict))
    unexpected = sorted(set(state_dict) - set(expected))
    if missing or unexpected:
        raise ValueError(f"load_checkpoint(path) -- Parameters do not match the config, missing {missing}, unexpected {unexpected}")
    for name, tensor in state_dict.items():
        if tensor.shape != expected[name].shape:
            raise ValueError(f"load_checkpoint(path) -- Shape mismatch for {name}: {tuple(tensor.shape)} != {tuple(expected[name].shape)}")

    model.load_state_dict(state_dict)
    model.eval()
    logger.info("checkpoint loaded path=%s vocab_size=%d", path, config.vocab_size)
    return Checkpoint(model, vocab, payload.get("train_state", {}))
