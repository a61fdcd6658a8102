from .losses import bce_loss, mle_loss, total_loss
from .trainer import TrainConfig, TrainState, batch_loss, length_batches, train, validate

__all__ = [
    "batch_loss",
    "bce_loss",
    "length_batches",
    "mle_loss",
    "total_loss",
    "train",
    "TrainConfig",
    "TrainState",
    "validate"
    ]
