"""
selector.py
===========

This module scores sentences and turns the scores into binary gates.

Modules
-------
selector
    Handle the sentence convolutions, the gate probabilities and the straight-through gate.
"""

from typing import List, Optional, Sequence, Tuple

import torch
import torch.nn as nn
import torch.nn.functional as F

from .config import ModelConfig


class StraightThroughGate(torch.autograd.Function):
    """
    Hard threshold forward, identity backward.

    Forward returns 1 where the probability is strictly above the threshold and
    0 elsewhere. Backward passes the incoming gradient through unchanged.
    """

    @staticmethod
    def forward(ctx, probs: torch.Tensor, threshold: float) -> torch.Tensor:
        return (probs > threshold).to(probs.dtype)

    @staticmethod
    def backward(ctx, grad_output: torch.Tensor):
        return grad_output, None


class SentenceSelector(nn.Module):
    """
    Convolutional sentence encoder followed by a one-hidden-layer MLP scoring head.

    Each sentence is convolved with every window size (stride 1, sentences shorter
    than the window are zero-padded on both sides), max-pooled over positions and
    the pooled features of all window sizes are concatenated. The MLP and the output
    vector are shared by all sentences.

    :param config: Network hyperparameters.
    :type config: ModelConfig
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.kernel_sizes = config.cnn_kernel_sizes
        self.threshold = config.gate_threshold

        in_dim = config.embed_dim if config.selector_input == "embedding" else config.hidden_dim
        self.convs = nn.ModuleList([nn.Conv1d(in_dim, config.cnn_channels, k) for k in self.kernel_sizes])
        self.mlp = nn.Linear(config.cnn_channels * len(self.kernel_sizes), config.selector_mlp_hidden)
        self.output_head = nn.Linear(config.selector_mlp_hidden, 1, bias=False)

    def sentence_representations(self, inputs: torch.Tensor, spans: Sequence[Tuple[int, int]]) -> torch.Tensor:
        """
        Max-pooled convolution features of every sentence.

        :param inputs: Token rows fed to the convolutions, shape (T, in_dim).
        :type inputs: torch.Tensor
        :param spans: Sentence spans.
        :type spans: list[tuple[int, int]]

        :returns: Sentence features, shape (S, channels * len(kernel_sizes)).
        :rtype: torch.Tensor
        """
        reprs = []
        for start, end in spans:
            window = inputs[start:end].t().unsqueeze(0)  # (1, in_dim, L)
            length = end - start
            pooled = []
            for k, conv in zip(self.kernel_sizes, self.convs):
                padded = window
                if length < k:
                    pad = k - length
                    padded = F.pad(window, (pad // 2, pad - pad // 2))
                feature_map = torch.tanh(conv(padded))  # (1, channels, L - k + 1)
                pooled.append(feature_map.max(dim=2).values.squeeze(0))
            reprs.append(torch.cat(pooled))
        return torch.stack(reprs)

    def probabilities(self, sentence_reprs: torch.Tensor) -> torch.Tensor:
        """
        Probability that each sentence is significant.

        :param sentence_reprs: Output of :meth:`sentence_representations`.
        :type sentence_reprs: torch.Tensor

        :returns: Probabilities, shape (S,).
        :rtype: torch.Tensor
        """
        hidden = torch.tanh(self.mlp(sentence_reprs))
        return torch.sigmoid(self.output_head(hidden)).squeeze(-1)

    def binarize(
        self,
        probs: torch.Tensor,
        override: Optional[Sequence[int]] = None,
        anchor: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> torch.Tensor:
        """
        Binary gate of each sentence.

        :param probs: Sentence probabilities, shape (S,).
        :type probs: torch.Tensor
        :param override: Forced gate values; no gradient flows to the probabilities.
        :type override: list[int], optional
        :param anchor: ``(gates, probs)`` recorded at a reference point. The gate is then
            ``gates + probs - reference_probs``, the differentiable function whose value at
            the reference point is the hard gate and whose derivative is the
            straight-through one. Used to audit gradients with finite differences.
        :type anchor: tuple[torch.Tensor, torch.Tensor], optional

        :returns: Gates, shape (S,).
        :rtype: torch.Tensor

        :raises ValueError: If the override does not give one value in {0, 1} per sentence.
        """
        if override is not None:
            values = [int(v) for v in override]
            if len(values) != probs.shape[0] or any(v not in (0, 1) for v in values):
                raise ValueError(f"SentenceSelector.binarize(override) -- Expected {probs.shape[0]} values in {{0, 1}}: {list(override)}")
            return torch.tensor(values, dtype=probs.dtype)

        if anchor is not None:
            gates, reference = anchor
            return gates.detach() + probs - reference.detach()

        return StraightThroughGate.apply(probs, self.threshold)

    def forward(self, inputs: torch.Tensor, spans: Sequence[Tuple[int, int]]) -> Tuple[torch.Tensor, torch.Tensor]:
        reprs = self.sentence_representations(inputs, spans)
        return reprs, self.probabilities(reprs)


def gate_accuracy(gates: List[Sequence[int]], labels: List[Sequence[int]]) -> float:
    """
    Share of sentences whose gate equals their weak label.

    :param gates: Gate values per document.
    :type gates: list[list[int]]
    :param labels: Weak labels per document.
    :type labels: list[list[int]]

    :returns: Accuracy over all sentences (0.0 if there are none).
    :rtype: float
    """
    total = 0
    correct = 0
    for doc_gates, doc_labels in zip(gates, labels):
        total += len(doc_labels)
        correct += sum(int(g) == int(a) for g, a in zip(doc_gates, doc_labels))
    return correct / total if total else 0.0
