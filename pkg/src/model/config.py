"""
config.py
=========

This module holds the hyperparameters of the network.

Modules
-------
config
    Handle the network hyperparameters.
"""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Tuple

from .constants import (
    CNN_CHANNELS, CNN_KERNEL_SIZES, EMBED_DIM, ENCODER_TYPES, GATE_THRESHOLD, HIDDEN_DIM,
    MAX_DECODE_LENGTH, SELECTOR_INPUTS, SELECTOR_MLP_HIDDEN, SIGNIFICANCE_EMBED_DIM,
)


@dataclass
class ModelConfig:
    """
    Hyperparameters of the keyphrase generator.

    :ivar vocab_size: Size of the vocabulary (specials included).
    :ivar embed_dim: Word embedding width.
    :ivar hidden_dim: Encoder state width (forward and backward halves concatenated).
    :ivar cnn_kernel_sizes: Window sizes of the sentence convolutions.
    :ivar cnn_channels: Filters per window size.
    :ivar selector_mlp_hidden: Hidden width of the selector MLP.
    :ivar significance_embed_dim: Width of the two significance embeddings (must equal hidden_dim).
    :ivar gate_threshold: A sentence is significant when its probability is strictly above it.
    :ivar max_decode_len: Maximum number of greedy decoding steps.
    :ivar encoder_type: "gru" or "lstm".
    :ivar selector_input: Sentence convolutions read "embedding" rows or encoder "hidden" rows.
    :ivar use_selector: False gives the plain copy-attention backbone (no sentence gate).
    :ivar copy_attention: False disables the copy pathway.

    :raises ValueError: If a field is invalid.
    """
    vocab_size: int
    embed_dim: int = EMBED_DIM
    hidden_dim: int = HIDDEN_DIM
    cnn_kernel_sizes: Tuple[int, ...] = CNN_KERNEL_SIZES
    cnn_channels: int = CNN_CHANNELS
    selector_mlp_hidden: int = SELECTOR_MLP_HIDDEN
    significance_embed_dim: int = SIGNIFICANCE_EMBED_DIM
    gate_threshold: float = GATE_THRESHOLD
    max_decode_len: int = MAX_DECODE_LENGTH
    encoder_type: str = "gru"
    selector_input: str = "embedding"
    use_selector: bool = True
    copy_attention: bool = True

    def __post_init__(self):
        self.cnn_kernel_sizes = tuple(int(k) for k in self.cnn_kernel_sizes)

        for name in ("vocab_size", "embed_dim", "hidden_dim", "cnn_channels", "selector_mlp_hidden",
                     "significance_embed_dim", "max_decode_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"ModelConfig({name}) -- Must be positive: {getattr(self, name)}")
        if not self.cnn_kernel_sizes or min(self.cnn_kernel_sizes) <= 0:
            raise ValueError(f"ModelConfig(cnn_kernel_sizes) -- Invalid kernel sizes: {self.cnn_kernel_sizes}")
        if self.hidden_dim % 2 != 0:
            raise ValueError(f"ModelConfig(hidden_dim) -- Must be even (two directions): {self.hidden_dim}")
        if self.significance_embed_dim != self.hidden_dim:
            raise ValueError(f"ModelConfig(significance_embed_dim) -- Must equal hidden_dim {self.hidden_dim}: {self.significance_embed_dim}")
        if not 0.0 < self.gate_threshold < 1.0:
            raise ValueError(f"ModelConfig(gate_threshold) -- Must be in (0, 1): {self.gate_threshold}")
        if self.encoder_type not in ENCODER_TYPES:
            raise ValueError(f"ModelConfig(encoder_type) -- Expected one of {ENCODER_TYPES}: {self.encoder_type}")
        if self.selector_input not in SELECTOR_INPUTS:
            raise ValueError(f"ModelConfig(selector_input) -- Expected one of {SELECTOR_INPUTS}: {self.selector_input}")

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        out["cnn_kernel_sizes"] = list(self.cnn_kernel_sizes)
        return out

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "ModelConfig":
        """
        Create a config from a JSON object, ignoring unknown keys.

        :param obj: Decoded JSON object.
        :type obj: dict

        :returns: The config.
        :rtype: ModelConfig

        :raises ValueError: If a field is invalid or vocab_size is missing.
        """
        names = {f.name for f in fields(cls)}
        if "vocab_size" not in obj:
            raise ValueError("ModelConfig.from_json(obj) -- Missing field: vocab_size")
        return cls(**{key: value for key, value in obj.items() if key in names})
