"""
losses.py
=========

This module holds the training objective.

Modules
-------
losses
    Handle the likelihood loss, the sentence-label loss and their combination.
trainer
    Handle the optimization loop, validation, checkpoints and the training log.
"""

from typing import Sequence, Union

import torch

from .constants import BCE_EPSILON

Batch = Union[torch.Tensor, Sequence[torch.Tensor]]


def _as_batch(values: Batch) -> Sequence[torch.Tensor]:
    return [values] if isinstance(values, torch.Tensor) else list(values)


def mle_loss(step_logps: Batch) -> torch.Tensor:
    """
    Negative log-likelihood of the targets, summed over steps and averaged over the batch.

    :param step_logps: Per-step log-probabilities of one example, or one tensor per example.
    :type step_logps: torch.Tensor or list[torch.Tensor]

    :returns: The loss.
    :rtype: torch.Tensor

    :raises ValueError: If the batch or an example has no step.
    """
    batch = _as_batch(step_logps)
    if not batch or any(logps.numel() == 0 for logps in batch):
        raise ValueError("mle_loss(step_logps) -- Every example needs at least one step")
    return torch.stack([-logps.sum() for logps in batch]).mean()


def bce_loss(probs: Batch, labels: Batch, epsilon: float = BCE_EPSILON) -> torch.Tensor:
    """
    Binary cross-entropy between sentence probabilities and weak labels, summed over
    sentences and averaged over the batch.

    Probabilities are clamped to ``[epsilon, 1 - epsilon]``.

    :param probs: Sentence probabilities of one example, or one tensor per example.
    :type probs: torch.Tensor or list[torch.Tensor]
    :param labels: Weak labels (0 or 1), same layout as ``probs``.
    :type labels: torch.Tensor or list[torch.Tensor]
    :param epsilon: Clamp margin.
    :type epsilon: float

    :returns: The loss.
    :rtype: torch.Tensor

    :raises ValueError: If the layouts of probs and labels differ.
    """
    probs, labels = _as_batch(probs), _as_batch(labels)
    if len(probs) != len(labels) or not probs:
        raise ValueError(f"bce_loss(probs, labels) -- Expected the same non-zero number of examples: {len(probs)} != {len(labels)}")

    losses = []
    for eta, a in zip(probs, labels):
        if eta.shape != a.shape:
            raise ValueError(f"bce_loss(probs, labels) -- Shape mismatch: {tuple(eta.shape)} != {tuple(a.shape)}")
        a = a.to(eta.dtype)
        eta = eta.clamp(epsilon, 1.0 - epsilon)
        losses.append(-(a * torch.log(eta) + (1.0 - a) * torch.log(1.0 - eta)).sum())
    return torch.stack(losses).mean()


def total_loss(mle: torch.Tensor, bce: torch.Tensor, lambda_bce: float) -> torch.Tensor:
    """
    ``mle + lambda_bce * bce``.

    :raises ValueError: If lambda_bce is negative.
    """
    if lambda_bce < 0:
        raise ValueError(f"total_loss(lambda_bce) -- Must be non-negative: {lambda_bce}")
    return mle + lambda_bce * bce
