from .data import *
from .model import *
from .training import *
from .features import *
from .API import *

__all__ = [
    "API",
    "Document",
    "Evaluator",
    "KeyphraseGenerator",
    "LabeledExample",
    "main",
    "MetricsReport",
    "ModelConfig",
    "RawRecord",
    "RunConfig",
    "train",
    "TrainConfig",
    "Vocab"
]
