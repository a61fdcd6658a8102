from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .config import ModelConfig
from .decoder import AdditiveAttention, CopyDecoder, DecodeState
from .encoder import EncoderState, SentenceSelectiveEncoder
from .generator import KeyphraseGenerator, Prediction, split_decoded
from .selector import SentenceSelector, StraightThroughGate, gate_accuracy

__all__ = [
    "AdditiveAttention",
    "Checkpoint",
    "CopyDecoder",
    "DecodeState",
    "EncoderState",
    "gate_accuracy",
    "KeyphraseGenerator",
    "load_checkpoint",
    "ModelConfig",
    "Prediction",
    "save_checkpoint",
    "SentenceSelectiveEncoder",
    "SentenceSelector",
    "split_decoded",
    "StraightThroughGate"
    ]
