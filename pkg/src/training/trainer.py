"""
trainer.py
==========

This module optimizes the keyphrase generator.

Modules
-------
losses
    Handle the likelihood loss, the sentence-label loss and their combination.
trainer
    Handle the optimization loop, validation, checkpoints and the training log.
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Sequence, Tuple

import torch

from ..data import LabeledExample, MatchConfig, TokenizedExample, Vocab, encode_example
from ..features.evaluation import Evaluator
from ..features.constants import PRESENT_SPLIT
from ..model import KeyphraseGenerator, ModelConfig, gate_accuracy, load_checkpoint, save_checkpoint
from .constants import (
    BATCH_SIZE, BCE_REDUCTION, BEST_CHECKPOINT_NAME, CLIP_NORM, DIVERGENCE_DUMP_NAME, INIT_RANGE, LAMBDA_BCE,
    LAST_CHECKPOINT_NAME, LEARNING_RATE, MAX_EPOCHS, PATIENCE, SEED, TRAIN_LOG_NAME, VALIDATION_INTERVAL,
)
from .losses import bce_loss, mle_loss, total_loss

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    """
    Optimization settings.

    :ivar lambda_bce: Weight of the sentence-label loss.
    :ivar learning_rate: Adam learning rate.
    :ivar batch_size: Examples per optimizer step.
    :ivar max_epochs: Maximum number of passes over the training set.
    :ivar clip_norm: Maximum global gradient norm.
    :ivar seed: Seed of the initialization and of the batch order.
    :ivar init_range: Parameters start uniform in ``[-init_range, init_range]``.
    :ivar validation_interval: Epochs between two validations.
    :ivar patience: Validations without improvement before stopping.

    :raises ValueError: If a field is invalid.
    """
    lambda_bce: float = LAMBDA_BCE
    learning_rate: float = LEARNING_RATE
    batch_size: int = BATCH_SIZE
    max_epochs: int = MAX_EPOCHS
    clip_norm: float = CLIP_NORM
    seed: int = SEED
    init_range: float = INIT_RANGE
    validation_interval: int = VALIDATION_INTERVAL
    patience: int = PATIENCE

    def __post_init__(self):
        if self.lambda_bce < 0:
            raise ValueError(f"TrainConfig(lambda_bce) -- Must be non-negative: {self.lambda_bce}")
        if self.learning_rate < 0:
            raise ValueError(f"TrainConfig(learning_rate) -- Must be non-negative: {self.learning_rate}")
        for name in ("batch_size", "max_epochs", "validation_interval", "patience"):
            if getattr(self, name) <= 0:
                raise ValueError(f"TrainConfig({name}) -- Must be positive: {getattr(self, name)}")
        if self.clip_norm <= 0:
            raise ValueError(f"TrainConfig(clip_norm) -- Must be positive: {self.clip_norm}")
        if self.init_range <= 0:
            raise ValueError(f"TrainConfig(init_range) -- Must be positive: {self.init_range}")

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "TrainConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in obj.items() if key in names})


@dataclass
class TrainState:
    """
    Everything needed to continue a run exactly where it stopped.

    :ivar epoch: Completed epochs.
    :ivar step: Optimizer steps taken.
    :ivar best_score: Best validation present F1@M so far.
    :ivar bad_validations: Validations since the last improvement.
    :ivar optimizer: Adam state dict.
    :ivar rng_state: State of the batch-order generator.
    """
    epoch: int = 0
    step: int = 0
    best_score: float = -1.0
    bad_validations: int = 0
    optimizer: Dict[str, Any] = field(default_factory=dict)
    rng_state: Optional[torch.Tensor] = None

    def to_checkpoint(self, train_config: TrainConfig) -> Dict[str, Any]:
        return {
            "epoch": self.epoch,
            "step": self.step,
            "best_score": self.best_score,
            "bad_validations": self.bad_validations,
            "optimizer": self.optimizer,
            "rng_state": self.rng_state,
            "train_config": train_config.to_json(),
        }

    @classmethod
    def from_checkpoint(cls, obj: Dict[str, Any]) -> "TrainState":
        if "rng_state" not in obj or "optimizer" not in obj:
            raise ValueError("TrainState.from_checkpoint(obj) -- The checkpoint holds no training state")
        return cls(
            int(obj["epoch"]),
            int(obj["step"]),
            float(obj["best_score"]),
            int(obj["bad_validations"]),
            obj["optimizer"],
            obj["rng_state"],
        )


def length_batches(examples: Sequence[TokenizedExample], batch_size: int) -> List[List[int]]:
    """
    Group example indices into batches of similar source length.

    :param examples: Encoded examples.
    :type examples: list[TokenizedExample]
    :param batch_size: Maximum batch size.
    :type batch_size: int

    :returns: Batches of indices, shortest sources first.
    :rtype: list[list[int]]
    """
    order = sorted(range(len(examples)), key=lambda i: (examples[i].source_length, i))
    return [order[i:i + batch_size] for i in range(0, len(order), batch_size)]


def batch_loss(
    model: KeyphraseGenerator,
    batch: Sequence[TokenizedExample],
    labels: Sequence[Sequence[int]],
    lambda_bce: float
) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """
    Loss of a batch, each example run on its own so no padding is involved.

    :param model: The generator.
    :type model: KeyphraseGenerator
    :param batch: Encoded examples with targets.
    :type batch: list[TokenizedExample]
    :param labels: Weak sentence labels of each example.
    :type labels: list[list[int]]
    :param lambda_bce: Weight of the sentence-label loss.
    :type lambda_bce: float

    :returns: The total loss, the likelihood loss and the sentence-label loss.
    :rtype: tuple[torch.Tensor, torch.Tensor, torch.Tensor]
    """
    step_logps = []
    probs = []
    for example in batch:
        logps, eta = model.forward_loss_path(example)
        step_logps.append(logps)
        probs.append(eta)

    mle = mle_loss(step_logps)
    if model.config.use_selector:
        dtype = probs[0].dtype
        bce = bce_loss(probs, [torch.tensor(a, dtype=dtype) for a in labels])
    else:
        bce = torch.zeros((), dtype=mle.dtype)
    return total_loss(mle, bce, lambda_bce), mle, bce


def validate(
    model: KeyphraseGenerator,
    examples: Sequence[LabeledExample],
    encoded: Sequence[TokenizedExample],
    vocab: Vocab,
    match_config: MatchConfig = MatchConfig()
) -> Tuple[float, Optional[float]]:
    """
    Present-keyphrase F1@M of greedy decoding and sentence-gate accuracy.

    :returns: The F1@M and the gate accuracy (None without selector).
    :rtype: tuple[float, float or None]
    """
    model.eval()
    predictions = []
    gates = []
    for example in encoded:
        prediction = model.greedy_decode(example, vocab, match_config)
        predictions.append(prediction.keyphrases)
        gates.append(prediction.gates)
    model.train()

    report = Evaluator(match_config).evaluate(examples, predictions)
    accuracy = None
    if model.config.use_selector:
        accuracy = gate_accuracy(gates, [example.sentence_labels for example in examples])
    return report.splits[PRESENT_SPLIT].f1_at_m.f1, accuracy


def _dump_divergence(path: str, state: TrainState, batch_ids: List[Optional[str]], mle: torch.Tensor, bce: torch.Tensor):
    with open(path, "w", encoding="utf-8") as file:
        json.dump({
            "epoch": state.epoch + 1,
            "step": state.step + 1,
            "document_ids": batch_ids,
            "mle": float(mle.detach()),
            "bce": float(bce.detach()),
        }, file, indent=4)


def train(
    dataset: Sequence[LabeledExample],
    val_dataset: Sequence[LabeledExample],
    vocab: Vocab,
    model_config: ModelConfig,
    train_config: TrainConfig,
    out_dir: str,
    match_config: MatchConfig = MatchConfig(),
    resume_from: Optional[str] = None,
    run_config: Optional[Dict[str, Any]] = None
) -> str:
    """
    Train a generator with ``L = L_MLE + lambda * L_BCE``.

    Every ``validation_interval`` epochs the model is validated by present F1@M;
    ``last.ckpt`` is rewritten and ``best.ckpt`` kept for the best score. Losses
    of every step and validation results are appended to ``train_log.jsonl``.

    :param dataset: Labeled training examples.
    :type dataset: list[LabeledExample]
    :param val_dataset: Labeled validation examples.
    :type val_dataset: list[LabeledExample]
    :param vocab: Vocabulary.
    :type vocab: Vocab
    :param model_config: Network hyperparameters (ignored when resuming).
    :type model_config: ModelConfig
    :param train_config: Optimization settings.
    :type train_config: TrainConfig
    :param out_dir: Output directory.
    :type out_dir: str
    :param match_config: Normalization used by validation.
    :type match_config: MatchConfig
    :param resume_from: Checkpoint to continue from.
    :type resume_from: str, optional
    :param run_config: Configuration recorded in the log header.
    :type run_config: dict, optional

    :returns: Path of the best checkpoint.
    :rtype: str

    :raises ValueError: If a dataset is empty or the vocabulary does not fit the model.
    :raises RuntimeError: If the loss becomes NaN or infinite.
    """
    if not dataset or not val_dataset:
        raise ValueError(f"train(dataset, val_dataset) -- Datasets must be non-empty: {len(dataset)} and {len(val_dataset)} examples")
    os.makedirs(out_dir, exist_ok=True)

    if resume_from is not None:
        checkpoint = load_checkpoint(resume_from)
        if checkpoint.vocab != vocab:
            raise ValueError(f"train(resume_from) -- The checkpoint vocabulary differs from the given one: {resume_from}")
        model = checkpoint.model
        model_config = model.config
        state = TrainState.from_checkpoint(checkpoint.train_state)
    else:
        if model_config.vocab_size != len(vocab):
            raise ValueError(f"train(model_config) -- vocab_size {model_config.vocab_size} differs from the vocabulary: {len(vocab)}")
        torch.manual_seed(train_config.seed)
        model = KeyphraseGenerator(model_config)
        model.initialize(train_config.init_range)
        state = TrainState()
    model.train()

    optimizer = torch.optim.Adam(model.parameters(), lr=train_config.learning_rate)
    if state.optimizer:
        optimizer.load_state_dict(state.optimizer)
        for group in optimizer.param_groups:
            group["lr"] = train_config.learning_rate

    generator = torch.Generator()
    generator.manual_seed(train_config.seed)
    if state.rng_state is not None:
        generator.set_state(state.rng_state)

    encoded = [encode_example(example.document, vocab, example.categories) for example in dataset]
    labels = [example.sentence_labels for example in dataset]
    val_encoded = [encode_example(example.document, vocab) for example in val_dataset]
    batches = length_batches(encoded, train_config.batch_size)

    log_path = os.path.join(out_dir, TRAIN_LOG_NAME)
    best_path = os.path.join(out_dir, BEST_CHECKPOINT_NAME)
    last_path = os.path.join(out_dir, LAST_CHECKPOINT_NAME)

    logger.info(
        "training start examples=%d val_examples=%d batches=%d lambda=%.4f resume_from=%s",
        len(encoded), len(val_encoded), len(batches), train_config.lambda_bce, resume_from,
    )

    with open(log_path, "w", encoding="utf-8") as log:
        def write(record: Dict[str, Any]):
            log.write(json.dumps(record, sort_keys=True) + "\n")
            log.flush()

        write({
            "type": "header",
            "run_config": run_config,
            "model_config": model_config.to_json(),
            "train_config": train_config.to_json(),
            "bce_reduction": BCE_REDUCTION,
            "resumed_from": resume_from,
            "start_epoch": state.epoch,
        })

        while state.epoch < train_config.max_epochs:
            for batch_index in torch.randperm(len(batches), generator=generator).tolist():
                indices = batches[batch_index]
                loss, mle, bce = batch_loss(model, [encoded[i] for i in indices], [labels[i] for i in indices], train_config.lambda_bce)

                if not math.isfinite(float(loss.detach())):
                    dump_path = os.path.join(out_dir, DIVERGENCE_DUMP_NAME)
                    _dump_divergence(dump_path, state, [dataset[i].document.id for i in indices], mle, bce)
                    raise RuntimeError(f"train() -- Loss diverged at step {state.step + 1}, batch dumped to: '{dump_path}'")

                optimizer.zero_grad()
                loss.backward()
                torch.nn.utils.clip_grad_norm_(model.parameters(), train_config.clip_norm)
                optimizer.step()
                state.step += 1

                write({
                    "type": "step",
                    "epoch": state.epoch + 1,
                    "step": state.step,
                    "loss": float(loss.detach()),
                    "mle": float(mle.detach()),
                    "bce": float(bce.detach()),
                })
                logger.debug("epoch=%d step=%d mle=%.4f bce=%.4f", state.epoch + 1, state.step, float(mle), float(bce))

            state.epoch += 1
            if state.epoch % train_config.validation_interval != 0 and state.epoch < train_config.max_epochs:
                continue

            score, accuracy = validate(model, val_dataset, val_encoded, vocab, match_config)
            improved = score > state.best_score
            if improved:
                state.best_score = score
                state.bad_validations = 0
            else:
                state.bad_validations += 1

            write({
                "type": "validation",
                "epoch": state.epoch,
                "step": state.step,
                "present_f1@M": score,
                "gate_accuracy": accuracy,
                "best": improved,
            })
            logger.info("validation epoch=%d present_f1@M=%.4f gate_accuracy=%s best=%s", state.epoch, score, accuracy, improved)

            state.optimizer = optimizer.state_dict()
            state.rng_state = generator.get_state()
            train_state = state.to_checkpoint(train_config)
            save_checkpoint(last_path, model, vocab, train_state)
            if improved:
                save_checkpoint(best_path, model, vocab, train_state)

            if state.bad_validations >= train_config.patience:
                logger.info("early stop epoch=%d best_present_f1@M=%.4f", state.epoch, state.best_score)
                break

    if not os.path.isfile(best_path):
        save_checkpoint(best_path, model, vocab, state.to_checkpoint(train_config))
    logger.info("training done epochs=%d steps=%d best_present_f1@M=%.4f", state.epoch, state.step, state.best_score)
    return best_path
