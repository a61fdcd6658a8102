"""
decoder.py
==========

This module holds the attention and the copy-augmented recurrent decoder.

Modules
-------
decoder
    Handle attention, decoder state updates and the generate/copy distribution.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import torch
import torch.nn as nn

from .config import ModelConfig


@dataclass
class DecodeState:
    """
    Decoder state between two steps.

    :ivar state: Decoder hidden vector, shape (d,).
    :ivar context: Last context vector, shape (d,).
    :ivar step: Number of steps already decoded.
    :ivar output_ids: Ids emitted so far (extended vocabulary).
    """
    state: torch.Tensor
    context: Optional[torch.Tensor] = None
    step: int = 0
    output_ids: List[int] = field(default_factory=list)


class AdditiveAttention(nn.Module):
    """
    Additive (concat) attention: ``score_j = v . tanh(W F_j + U s + b)``.

    :param hidden_dim: Width of the encoder and decoder states.
    :type hidden_dim: int
    """

    def __init__(self, hidden_dim: int):
        super().__init__()
        self.encoder_proj = nn.Linear(hidden_dim, hidden_dim, bias=False)
        self.decoder_proj = nn.Linear(hidden_dim, hidden_dim)
        self.v = nn.Linear(hidden_dim, 1, bias=False)

    def project(self, fused: torch.Tensor) -> torch.Tensor:
        return self.encoder_proj(fused)

    def score(self, fused: torch.Tensor, state: torch.Tensor, projected: Optional[torch.Tensor] = None) -> torch.Tensor:
        """
        Alignment score of every source position.

        :param fused: Encoder output F, shape (T, d).
        :type fused: torch.Tensor
        :param state: Decoder state, shape (d,).
        :type state: torch.Tensor
        :param projected: Cached :meth:`project` of ``fused``.
        :type projected: torch.Tensor, optional

        :returns: Scores, shape (T,).
        :rtype: torch.Tensor
        """
        if projected is None:
            projected = self.project(fused)
        return self.v(torch.tanh(projected + self.decoder_proj(state))).squeeze(-1)

    def forward(
        self,
        fused: torch.Tensor,
        state: torch.Tensor,
        projected: Optional[torch.Tensor] = None
    ) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Context vector and attention weights.

        :returns:
            - Context ``sum_j weights_j F_j``, shape (d,).
            - Weights (softmax of the scores, summing to 1), shape (T,).
        :rtype: tuple[torch.Tensor, torch.Tensor]
        """
        weights = torch.softmax(self.score(fused, state, projected), dim=0)
        return weights @ fused, weights


class CopyDecoder(nn.Module):
    """
    One-layer recurrent decoder with attention and a copy pathway.

    Generation logits over the vocabulary and copy scores over source positions
    share one softmax; positions holding the same token are then summed into that
    token's entry of the extended vocabulary.

    :param config: Network hyperparameters.
    :type config: ModelConfig
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        d = config.hidden_dim

        self.bridge = nn.Linear(d, d)
        self.attention = AdditiveAttention(d)
        self.cell = nn.GRUCell(config.embed_dim + d, d)
        self.output = nn.Linear(config.embed_dim + 2 * d, config.vocab_size)
        self.copy_proj = nn.Linear(d, d, bias=False) if config.copy_attention else None

    def init_state(self, summary: torch.Tensor) -> torch.Tensor:
        return torch.tanh(self.bridge(summary))

    def forward(
        self,
        prev_embedded: torch.Tensor,
        state: torch.Tensor,
        fused: torch.Tensor,
        source_extended_ids: torch.Tensor,
        num_oov: int,
        projected: Optional[torch.Tensor] = None
    ) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
        """
        Run one decoding step.

        :param prev_embedded: Embedding of the previous output, shape (embed_dim,).
        :type prev_embedded: torch.Tensor
        :param state: Previous decoder state, shape (d,).
        :type state: torch.Tensor
        :param fused: Encoder output F, shape (T, d).
        :type fused: torch.Tensor
        :param source_extended_ids: Extended ids of the source, shape (T,).
        :type source_extended_ids: torch.Tensor
        :param num_oov: Number of OOV tokens of the example.
        :type num_oov: int
        :param projected: Cached attention projection of ``fused``.
        :type projected: torch.Tensor, optional

        :returns:
            - New decoder state, shape (d,).
            - Distribution over the extended vocabulary, shape (V + num_oov,).
            - Attention weights, shape (T,).
            - Context vector, shape (d,).
        :rtype: tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]
        """
        context, weights = self.attention(fused, state, projected)
        new_state = self.cell(torch.cat([prev_embedded, context]).unsqueeze(0), state.unsqueeze(0)).squeeze(0)
        gen_logits = self.output(torch.cat([prev_embedded, new_state, context]))

        vocab_size = gen_logits.shape[0]
        if self.copy_proj is None:
            probs = torch.softmax(gen_logits, dim=0)
            return new_state, torch.cat([probs, probs.new_zeros(num_oov)]), weights, context

        copy_scores = torch.sigmoid(self.copy_proj(fused)) @ new_state  # (T,)
        joint = torch.softmax(torch.cat([gen_logits, copy_scores]), dim=0)
        probs = torch.cat([joint[:vocab_size], joint.new_zeros(num_oov)])
        probs = probs.index_add(0, source_extended_ids, joint[vocab_size:])
        return new_state, probs, weights, context
