"""
encoder.py
==========

This module encodes a source document and fuses sentence significance into it.

Modules
-------
encoder
    Handle the recurrent encoder and the significance fusion.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import torch
import torch.nn as nn

from .config import ModelConfig
from .selector import SentenceSelector


@dataclass
class EncoderState:
    """
    Everything the encoder computes for one document.

    :ivar hidden: Token states, shape (T, d).
    :ivar sentence_reprs: Pooled sentence features, shape (S, features) (empty without selector).
    :ivar probs: Probability that each sentence is significant, shape (S,).
    :ivar gates: Binary gate of each sentence, shape (S,).
    :ivar token_gates: Gate of the sentence of each token, shape (T,).
    :ivar significance: Significance embedding of each token, shape (T, d).
    :ivar fused: hidden + significance, shape (T, d); what the decoder attends to.
    :ivar summary: Final forward and backward states concatenated, shape (d,).
    """
    hidden: torch.Tensor
    sentence_reprs: torch.Tensor
    probs: torch.Tensor
    gates: torch.Tensor
    token_gates: torch.Tensor
    significance: torch.Tensor
    fused: torch.Tensor
    summary: torch.Tensor


class SentenceSelectiveEncoder(nn.Module):
    """
    Bidirectional recurrent encoder whose states are shifted by a learned
    significance embedding chosen by the gate of their sentence.

    :param config: Network hyperparameters.
    :type config: ModelConfig
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config

        rnn_class = nn.GRU if config.encoder_type == "gru" else nn.LSTM
        self.rnn = rnn_class(config.embed_dim, config.hidden_dim // 2, batch_first=True, bidirectional=True)

        if config.use_selector:
            self.selector = SentenceSelector(config)
            # Row 0 is added to tokens of irrelevant sentences, row 1 to significant ones
            self.significance = nn.Parameter(torch.empty(2, config.significance_embed_dim))
            nn.init.uniform_(self.significance, -0.1, 0.1)
        else:
            self.selector = None
            self.significance = None

    def forward(
        self,
        embedded: torch.Tensor,
        spans: Sequence[Tuple[int, int]],
        gate_override: Optional[Sequence[int]] = None,
        gate_anchor: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> EncoderState:
        """
        Encode one document.

        :param embedded: Source embeddings, shape (T, embed_dim).
        :type embedded: torch.Tensor
        :param spans: Sentence spans partitioning the T tokens.
        :type spans: list[tuple[int, int]]
        :param gate_override: Forced gate value per sentence.
        :type gate_override: list[int], optional
        :param gate_anchor: Linearised gate, see :meth:`SentenceSelector.binarize`.
        :type gate_anchor: tuple[torch.Tensor, torch.Tensor], optional

        :returns: The encoder state.
        :rtype: EncoderState
        """
        outputs, final = self.rnn(embedded.unsqueeze(0))
        if isinstance(final, tuple):
            final = final[0]
        hidden = outputs.squeeze(0)
        summary = torch.cat([final[0, 0], final[1, 0]])

        if self.selector is None:
            empty = hidden.new_zeros(0)
            return EncoderState(hidden, hidden.new_zeros(0, 0), empty, empty, hidden.new_zeros(hidden.shape[0]),
                                torch.zeros_like(hidden), hidden, summary)

        selector_inputs = embedded if self.config.selector_input == "embedding" else hidden
        sentence_reprs, probs = self.selector(selector_inputs, spans)
        gates = self.selector.binarize(probs, gate_override, gate_anchor)

        lengths = torch.tensor([end - start for start, end in spans])
        token_gates = torch.repeat_interleave(gates, lengths)
        on = token_gates.unsqueeze(1)
        significance = on * self.significance[1] + (1 - on) * self.significance[0]

        return EncoderState(hidden, sentence_reprs, probs, gates, token_gates, significance, hidden + significance, summary)
