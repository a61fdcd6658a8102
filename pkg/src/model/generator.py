"""
generator.py
============

This module assembles the sentence-selective keyphrase generator.

Modules
-------
generator
    Handle encoding, teacher-forced scoring and greedy decoding of examples.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import torch
import torch.nn as nn

from ..data import MatchConfig, TokenizedExample, Vocab, dedup_phrases, decode_ids, normalize_phrase
from ..data.constants import DIGIT_TOKEN, EOS_TOKEN, PEOS_TOKEN, SEP_TOKEN, SPECIAL_TOKENS, UNK_TOKEN
from .config import ModelConfig
from .constants import BOS_ID, EOS_ID, UNK_ID
from .decoder import CopyDecoder, DecodeState
from .encoder import EncoderState, SentenceSelectiveEncoder


@dataclass
class Prediction:
    """
    Output of greedy decoding for one example.

    :ivar present: Keyphrases of the present block, deduplicated.
    :ivar absent: Keyphrases of the absent block, deduplicated (and not repeating present ones).
    :ivar output_ids: Decoded ids over the extended vocabulary (``<eos>`` excluded).
    :ivar probs: Sentence probabilities.
    :ivar gates: Sentence gates.
    :ivar attention: Attention weights of every step.
    """
    present: List[List[str]]
    absent: List[List[str]]
    output_ids: List[int]
    probs: List[float]
    gates: List[int]
    attention: List[List[float]] = field(default_factory=list)

    @property
    def keyphrases(self) -> List[List[str]]:
        return self.present + self.absent

    def to_json(self):
        return {
            "present": [" ".join(kp) for kp in self.present],
            "absent": [" ".join(kp) for kp in self.absent],
            "probs": self.probs,
            "gates": self.gates,
        }


def split_decoded(
    tokens: Sequence[str],
    match_config: MatchConfig = MatchConfig()
) -> Tuple[List[List[str]], List[List[str]]]:
    """
    Split decoded tokens into present and absent keyphrases.

    Tokens after ``<eos>`` are ignored. The first ``<peos>`` divides the two blocks,
    ``<sep>`` (and any later ``<peos>``) divides keyphrases. A keyphrase holding
    ``<unk>`` is dropped whole, other special tokens are dropped. Duplicates (after
    normalization) are removed keeping the first occurrence.

    :param tokens: Decoded tokens.
    :type tokens: list[str]
    :param match_config: Normalization used to detect duplicates.
    :type match_config: MatchConfig

    :returns: Present and absent keyphrases.
    :rtype: tuple[list[list[str]], list[list[str]]]
    """
    blocks: List[List[List[str]]] = [[], []]
    block = 0
    current: List[str] = []

    def close():
        if current and UNK_TOKEN not in current:
            blocks[block].append(list(current))
        current.clear()

    for token in tokens:
        if token == EOS_TOKEN:
            break
        if token == PEOS_TOKEN and block == 0:
            close()
            block = 1
        elif token in (SEP_TOKEN, PEOS_TOKEN):
            close()
        elif token not in SPECIAL_TOKENS or token in (DIGIT_TOKEN, UNK_TOKEN):
            current.append(token)
    close()

    present = dedup_phrases(blocks[0], match_config)
    seen = {normalize_phrase(kp, match_config) for kp in present}
    absent = [kp for kp in dedup_phrases(blocks[1], match_config) if normalize_phrase(kp, match_config) not in seen]
    return present, absent


class KeyphraseGenerator(nn.Module):
    """
    Sequence-to-sequence keyphrase generator with a binary sentence selector.

    :param config: Network hyperparameters.
    :type config: ModelConfig

    :ivar embedding: Word embeddings shared by encoder and decoder.
    :vartype embedding: torch.nn.Embedding
    :ivar encoder: Sentence-selective encoder.
    :vartype encoder: SentenceSelectiveEncoder
    :ivar decoder: Copy-attention decoder.
    :vartype decoder: CopyDecoder
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.embedding = nn.Embedding(config.vocab_size, config.embed_dim)
        self.encoder = SentenceSelectiveEncoder(config)
        self.decoder = CopyDecoder(config)

    def initialize(self, init_range: float):
        """
        Draw every parameter uniformly from ``[-init_range, init_range]``.

        :param init_range: Half-width of the range.
        :type init_range: float
        """
        for param in self.parameters():
            nn.init.uniform_(param, -init_range, init_range)

    def _embed(self, token_ids: torch.Tensor) -> torch.Tensor:
        # Extended ids have no embedding: they are read as <unk>
        in_vocab = torch.where(token_ids >= self.config.vocab_size, torch.full_like(token_ids, UNK_ID), token_ids)
        return self.embedding(in_vocab)

    def encode(
        self,
        example: TokenizedExample,
        gate_override: Optional[Sequence[int]] = None,
        gate_anchor: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> EncoderState:
        """
        Encode an example.

        :param example: Encoded example.
        :type example: TokenizedExample
        :param gate_override: Forced gate value per sentence.
        :type gate_override: list[int], optional
        :param gate_anchor: Linearised gate, see :meth:`SentenceSelector.binarize`.
        :type gate_anchor: tuple[torch.Tensor, torch.Tensor], optional

        :returns: The encoder state.
        :rtype: EncoderState

        :raises ValueError: If the example has no source token.
        """
        if example.source_length == 0:
            raise ValueError("KeyphraseGenerator.encode(example) -- The example has no source token")
        source = torch.tensor(example.source_ids, dtype=torch.long)
        return self.encoder(self._embed(source), example.sentence_spans, gate_override, gate_anchor)

    def attend(self, fused: torch.Tensor, state: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Context vector and attention weights of a decoder state over F.

        :param fused: Encoder output F, shape (T, d).
        :type fused: torch.Tensor
        :param state: Decoder state, shape (d,).
        :type state: torch.Tensor

        :returns: Context (d,) and weights (T,).
        :rtype: tuple[torch.Tensor, torch.Tensor]
        """
        return self.decoder.attention(fused, state)

    def init_decode(self, encoded: EncoderState) -> DecodeState:
        return DecodeState(self.decoder.init_state(encoded.summary))

    def decode_step(
        self,
        prev_id: int,
        decode_state: DecodeState,
        fused: torch.Tensor,
        example: TokenizedExample,
        projected: Optional[torch.Tensor] = None
    ) -> Tuple[DecodeState, torch.Tensor, torch.Tensor]:
        """
        Run one decoding step from the previous output id.

        :param prev_id: Previous output, an extended-vocabulary id (OOV ids read as ``<unk>``).
        :type prev_id: int
        :param decode_state: State before the step.
        :type decode_state: DecodeState
        :param fused: Encoder output F, shape (T, d).
        :type fused: torch.Tensor
        :param example: Encoded example (for its extended ids).
        :type example: TokenizedExample
        :param projected: Cached attention projection of ``fused``.
        :type projected: torch.Tensor, optional

        :returns:
            - State after the step.
            - Distribution over the extended vocabulary (sums to 1).
            - Attention weights of the step.
        :rtype: tuple[DecodeState, torch.Tensor, torch.Tensor]
        """
        prev = self._embed(torch.tensor([prev_id], dtype=torch.long))[0]
        extended = torch.tensor(example.source_extended_ids, dtype=torch.long)
        state, probs, weights, context = self.decoder(
            prev, decode_state.state, fused, extended, len(example.oov_tokens), projected
        )
        return DecodeState(state, context, decode_state.step + 1, decode_state.output_ids), probs, weights

    def forward_loss_path(
        self,
        example: TokenizedExample,
        gate_override: Optional[Sequence[int]] = None,
        gate_anchor: Optional[Tuple[torch.Tensor, torch.Tensor]] = None
    ) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Teacher-forced log-probability of every target token.

        :param example: Encoded example with a target.
        :type example: TokenizedExample
        :param gate_override: Forced gate value per sentence.
        :type gate_override: list[int], optional
        :param gate_anchor: Linearised gate, see :meth:`SentenceSelector.binarize`.
        :type gate_anchor: tuple[torch.Tensor, torch.Tensor], optional

        :returns:
            - ``log p(y_t | y_<t, F)`` for every target step, shape (len(target_ids),).
            - Sentence probabilities, shape (S,).
        :rtype: tuple[torch.Tensor, torch.Tensor]

        :raises ValueError: If the example has no target.
        """
        if not example.target_ids:
            raise ValueError("KeyphraseGenerator.forward_loss_path(example) -- The example has no target")

        encoded = self.encode(example, gate_override, gate_anchor)
        fused = encoded.fused
        projected = self.decoder.attention.project(fused)
        extended = torch.tensor(example.source_extended_ids, dtype=torch.long)
        num_oov = len(example.oov_tokens)

        inputs = torch.tensor([BOS_ID] + example.target_ids[:-1], dtype=torch.long)
        embedded = self._embed(inputs)
        tiny = torch.finfo(fused.dtype).tiny

        state = self.decoder.init_state(encoded.summary)
        logps = []
        for t, target_id in enumerate(example.target_ids):
            state, probs, _, _ = self.decoder(embedded[t], state, fused, extended, num_oov, projected)
            logps.append(torch.log(probs[target_id].clamp_min(tiny)))

        return torch.stack(logps), encoded.probs

    @torch.no_grad()
    def greedy_decode(
        self,
        example: TokenizedExample,
        vocab: Vocab,
        match_config: MatchConfig = MatchConfig(),
        gate_override: Optional[Sequence[int]] = None,
        max_len: Optional[int] = None
    ) -> Prediction:
        """
        Decode an example by taking the most probable token at every step.

        Decoding stops at ``<eos>`` or after ``max_decode_len`` steps.

        :param example: Encoded example.
        :type example: TokenizedExample
        :param vocab: Vocabulary used to render ids.
        :type vocab: Vocab
        :param match_config: Normalization used to remove duplicated keyphrases.
        :type match_config: MatchConfig
        :param gate_override: Forced gate value per sentence.
        :type gate_override: list[int], optional
        :param max_len: Overrides ``config.max_decode_len``.
        :type max_len: int, optional

        :returns: The prediction.
        :rtype: Prediction
        """
        max_len = self.config.max_decode_len if max_len is None else max_len
        encoded = self.encode(example, gate_override)
        fused = encoded.fused
        projected = self.decoder.attention.project(fused)

        decode_state = self.init_decode(encoded)
        prev_id = BOS_ID
        attention = []
        for _ in range(max_len):
            decode_state, probs, weights = self.decode_step(prev_id, decode_state, fused, example, projected)
            attention.append(weights.tolist())
            prev_id = int(torch.argmax(probs))
            if prev_id == EOS_ID:
                break
            decode_state.output_ids = decode_state.output_ids + [prev_id]

        output_ids = decode_state.output_ids
        present, absent = split_decoded(decode_ids(output_ids, vocab, example.oov_tokens), match_config)
        return Prediction(
            present,
            absent,
            output_ids,
            encoded.probs.tolist(),
            [int(g) for g in encoded.gates.tolist()],
            attention,
        )
