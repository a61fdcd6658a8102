import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..data import Document, MatchConfig, Vocab, encode_example
from ..model import KeyphraseGenerator
from .constants import (
    ANALYSIS_FORMAT_VERSION, ATTENTION_DUMP_FORMAT_VERSION, IRRELEVANT_CONDITION, NATURAL_CONDITION, NUM_BUCKETS,
    PRESENT_SPLIT, SIGNIFICANT_CONDITION,
)
from .evaluation import MetricsReport

logger = logging.getLogger(__name__)

METRICS = ("f1@5", "f1@M")


def _gain(baseline: float, treatment: float) -> Optional[float]:
    if baseline == 0:
        return 0.0 if treatment == 0 else None
    return (treatment - baseline) / baseline


@dataclass
class Bucket:
    """
    Documents whose sentence count falls in ``[low, high)`` (``high`` included for the last bucket).

    :ivar low: Lower edge.
    :vartype low: float
    :ivar high: Upper edge.
    :vartype high: float
    :ivar num_documents: Documents in the bucket.
    :vartype num_documents: int
    :ivar baseline: Mean F1@5 and F1@M of the baseline.
    :vartype baseline: dict[str, float]
    :ivar treatment: Mean F1@5 and F1@M of the treatment.
    :vartype treatment: dict[str, float]
    :ivar gain: Relative gain ``(treatment - baseline) / baseline`` per metric (None when undefined).
    :vartype gain: dict[str, float or None]
    """
    low: float
    high: float
    num_documents: int
    baseline: Dict[str, float]
    treatment: Dict[str, float]
    gain: Dict[str, Optional[float]]

    def to_json(self) -> Dict[str, Any]:
        return {
            "low": self.low,
            "high": self.high,
            "num_documents": self.num_documents,
            "baseline": self.baseline,
            "treatment": self.treatment,
            "gain": self.gain,
        }


def quantile_edges(sentence_counts: Sequence[int], num_buckets: int = NUM_BUCKETS) -> List[float]:
    """
    Bucket edges at evenly spaced quantiles of the sentence counts.

    :raises ValueError: If there is no count or num_buckets is not positive.
    """
    if num_buckets <= 0:
        raise ValueError(f"quantile_edges(num_buckets) -- Must be positive: {num_buckets}")
    if len(sentence_counts) == 0:
        raise ValueError("quantile_edges(sentence_counts) -- No document")
    edges = np.quantile(np.asarray(sentence_counts, dtype=float), np.linspace(0.0, 1.0, num_buckets + 1))
    return [float(edge) for edge in edges]


def bucket_analysis(
    baseline: MetricsReport,
    treatment: MetricsReport,
    num_buckets: int = NUM_BUCKETS,
    edges: Optional[Sequence[float]] = None,
    split: str = PRESENT_SPLIT
) -> List[Bucket]:
    """
    Compare two systems on documents grouped by sentence count.

    Both reports must score the same documents in the same order. Buckets without
    document are omitted.

    :param baseline: Report of the baseline system.
    :type baseline: MetricsReport
    :param treatment: Report of the compared system.
    :type treatment: MetricsReport
    :param num_buckets: Number of quantile buckets (ignored when edges are given).
    :type num_buckets: int
    :param edges: Increasing bucket edges.
    :type edges: list[float], optional
    :param split: Split whose scores are compared.
    :type split: str

    :returns: The non-empty buckets in increasing order.
    :rtype: list[Bucket]

    :raises ValueError: If the reports do not cover the same documents or the edges are invalid.
    """
    base_rows, treat_rows = baseline.documents, treatment.documents
    if len(base_rows) != len(treat_rows) or any(
        (b["id"], b["num_sentences"]) != (t["id"], t["num_sentences"]) for b, t in zip(base_rows, treat_rows)
    ):
        raise ValueError("bucket_analysis(baseline, treatment) -- The reports do not cover the same documents")

    counts = np.array([row["num_sentences"] for row in base_rows], dtype=float)
    if edges is None:
        edges = quantile_edges(counts, num_buckets)
    edges = [float(edge) for edge in edges]
    if len(edges) < 2 or any(b < a for a, b in zip(edges, edges[1:])):
        raise ValueError(f"bucket_analysis(edges) -- Expected at least two non-decreasing edges: {edges}")

    def scores(rows, mask) -> Dict[str, float]:
        return {
            metric: float(np.mean([row["splits"][split][metric]["f1"] for row, keep in zip(rows, mask) if keep]))
            for metric in METRICS
        }

    buckets = []
    for i, (low, high) in enumerate(zip(edges, edges[1:])):
        last = i == len(edges) - 2
        mask = (counts >= low) & ((counts <= high) if last else (counts < high))
        if not mask.any():
            logger.warning("empty bucket omitted low=%s high=%s", low, high)
            continue

        base_scores = scores(base_rows, mask)
        treat_scores = scores(treat_rows, mask)
        buckets.append(Bucket(
            low,
            high,
            int(mask.sum()),
            base_scores,
            treat_scores,
            {metric: _gain(base_scores[metric], treat_scores[metric]) for metric in METRICS},
        ))
    return buckets


def analysis_report(buckets: Sequence[Bucket], split: str = PRESENT_SPLIT) -> Dict[str, Any]:
    return {
        "format_version": ANALYSIS_FORMAT_VERSION,
        "split": split,
        "buckets": [bucket.to_json() for bucket in buckets],
    }


def attention_dump(
    model: KeyphraseGenerator,
    doc: Document,
    vocab: Vocab,
    match_config: MatchConfig = MatchConfig()
) -> Dict[str, Any]:
    """
    Attention of greedy decoding under the natural gates and with every sentence
    forced significant, then forced irrelevant.

    Each condition records its gates, the attention row of every decoding step,
    the per-token sum of those rows and the decoded keyphrases. The model
    without selector only has the natural condition.

    :param model: Trained generator.
    :type model: KeyphraseGenerator
    :param doc: Source document.
    :type doc: Document
    :param vocab: Vocabulary of the model.
    :type vocab: Vocab
    :param match_config: Normalization used to remove duplicated keyphrases.
    :type match_config: MatchConfig

    :returns: JSON-compatible dump.
    :rtype: dict
    """
    example = encode_example(doc, vocab)
    num_sentences = doc.num_sentences

    overrides = {NATURAL_CONDITION: None}
    if model.config.use_selector:
        overrides[SIGNIFICANT_CONDITION] = [1] * num_sentences
        overrides[IRRELEVANT_CONDITION] = [0] * num_sentences
    else:
        logger.warning("model has no selector, only the natural condition is dumped id=%s", doc.id)

    natural_probs = None
    conditions = {}
    for name, override in overrides.items():
        prediction = model.greedy_decode(example, vocab, match_config, gate_override=override)
        if natural_probs is None:
            natural_probs = prediction.probs
        attention = np.asarray(prediction.attention, dtype=float).reshape(-1, example.source_length)
        conditions[name] = {
            "gates": prediction.gates,
            "attention": prediction.attention,
            "attention_sum": attention.sum(axis=0).tolist(),
            "present": [" ".join(kp) for kp in prediction.present],
            "absent": [" ".join(kp) for kp in prediction.absent],
        }

    return {
        "format_version": ATTENTION_DUMP_FORMAT_VERSION,
        "id": doc.id,
        "tokens": doc.tokens,
        "sentence_spans": [list(span) for span in doc.sentence_spans],
        "probs": natural_probs,
        "conditions": conditions,
    }
