import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from ..data import (
    Document, KeyphraseCategory, LabeledExample, MatchConfig, dedup_phrases, find_occurrences, normalize_phrase,
)
from .constants import (
    ABSENT_SPLIT, ABSENT_WITHOUT_SEMI_SPLIT, PRESENT_SPLIT, REPORT_FORMAT_VERSION, SEMI_PRESENT_SPLIT, SPLITS, TOP_K,
)

logger = logging.getLogger(__name__)


class Scores(NamedTuple):
    precision: float
    recall: float
    f1: float


ZERO_SCORES = Scores(0.0, 0.0, 0.0)


def _harmonic(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def count_matches(
    predictions: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    match_config: MatchConfig = MatchConfig()
) -> int:
    """
    Number of distinct predictions equal to a gold keyphrase after normalization.

    :param predictions: Predicted keyphrases.
    :type predictions: list[list[str]]
    :param gold: Gold keyphrases.
    :type gold: list[list[str]]
    :param match_config: Normalization applied before comparing.
    :type match_config: MatchConfig

    :return: Number of matches.
    :rtype: int
    """
    gold_keys = {normalize_phrase(kp, match_config) for kp in gold}
    pred_keys = {normalize_phrase(kp, match_config) for kp in predictions}
    return len(pred_keys & gold_keys)


def f1_at_m(
    predictions: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    match_config: MatchConfig = MatchConfig()
) -> Scores:
    """
    Precision, recall and F1 of all the predictions a model emits.

    Both lists are deduplicated after normalization. Empty predictions or empty
    gold give zero scores.

    :param predictions: Predicted keyphrases in rank order.
    :type predictions: list[list[str]]
    :param gold: Gold keyphrases.
    :type gold: list[list[str]]
    :param match_config: Normalization applied before comparing.
    :type match_config: MatchConfig

    :return: The scores.
    :rtype: Scores
    """
    predictions = dedup_phrases(predictions, match_config)
    gold = dedup_phrases(gold, match_config)
    if not gold or not predictions:
        return ZERO_SCORES

    matches = count_matches(predictions, gold, match_config)
    precision = matches / len(predictions)
    recall = matches / len(gold)
    return Scores(precision, recall, _harmonic(precision, recall))


def f1_at_k(
    predictions: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    k: int,
    match_config: MatchConfig = MatchConfig()
) -> Scores:
    """
    Precision, recall and F1 of exactly ``k`` predictions.

    The first ``k`` predictions are kept; fewer predictions are padded with wrong
    answers, so the precision denominator is always ``k``.

    :param predictions: Predicted keyphrases in rank order.
    :type predictions: list[list[str]]
    :param gold: Gold keyphrases.
    :type gold: list[list[str]]
    :param k: Number of predictions scored.
    :type k: int
    :param match_config: Normalization applied before comparing.
    :type match_config: MatchConfig

    :return: The scores.
    :rtype: Scores

    :raises ValueError: If k is not positive.
    """
    if k <= 0:
        raise ValueError(f"f1_at_k(k) -- Must be positive: {k}")

    predictions = dedup_phrases(predictions, match_config)[:k]
    gold = dedup_phrases(gold, match_config)
    if not gold:
        return ZERO_SCORES

    matches = count_matches(predictions, gold, match_config)
    precision = matches / k
    recall = matches / len(gold)
    return Scores(precision, recall, _harmonic(precision, recall))


def f1_at_5(
    predictions: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    match_config: MatchConfig = MatchConfig()
) -> Scores:
    return f1_at_k(predictions, gold, TOP_K, match_config)


@dataclass
class SplitInput:
    """
    Predictions and gold keyphrases scored together in one split.
    """
    predictions: List[List[str]]
    gold: List[List[str]]


def split_eval(
    doc: Document,
    predictions: Sequence[Sequence[str]],
    gold: Sequence[Sequence[str]],
    categories: Sequence[KeyphraseCategory]
) -> Dict[str, SplitInput]:
    """
    Route predictions and gold keyphrases to the present, absent, semi-present and
    absent-without-semi-present splits.

    Gold keyphrases follow their categories. A prediction is present when it occurs
    contiguously in the source and absent otherwise, whatever block the model put it
    in. Absent predictions are scored against both the semi-present and the
    absent-without-semi-present gold.

    :param doc: Source document.
    :type doc: Document
    :param predictions: Predicted keyphrases in rank order.
    :type predictions: list[list[str]]
    :param gold: Gold keyphrases.
    :type gold: list[list[str]]
    :param categories: Category of each gold keyphrase.
    :type categories: list[KeyphraseCategory]

    :return: The inputs of each split.
    :rtype: dict[str, SplitInput]

    :raises ValueError: If categories and gold are not aligned.
    """
    if len(categories) != len(gold):
        raise ValueError(f"split_eval(gold, categories) -- Expected {len(gold)} categories, got: {len(categories)}")

    present_predictions = []
    absent_predictions = []
    for kp in predictions:
        if find_occurrences(doc.tokens, kp):
            present_predictions.append(list(kp))
        else:
            absent_predictions.append(list(kp))

    def gold_of(*wanted: KeyphraseCategory) -> List[List[str]]:
        return [list(kp) for kp, category in zip(gold, categories) if category in wanted]

    return {
        PRESENT_SPLIT: SplitInput(present_predictions, gold_of(KeyphraseCategory.PRESENT)),
        ABSENT_SPLIT: SplitInput(absent_predictions, gold_of(KeyphraseCategory.SEMI_PRESENT, KeyphraseCategory.ABSENT_OTHER)),
        SEMI_PRESENT_SPLIT: SplitInput(absent_predictions, gold_of(KeyphraseCategory.SEMI_PRESENT)),
        ABSENT_WITHOUT_SEMI_SPLIT: SplitInput(absent_predictions, gold_of(KeyphraseCategory.ABSENT_OTHER)),
    }


@dataclass
class SplitMetrics:
    """
    Corpus-level scores of one split.

    :ivar f1_at_5: Mean precision, recall and F1 at 5 over all documents.
    :ivar f1_at_m: Mean precision, recall and F1 at M over all documents.
    :ivar micro_recall: Correct predictions over gold keyphrases, pooled over documents.
    :ivar num_correct: Gold keyphrases matched by a prediction.
    :ivar num_gold: Gold keyphrases of the split.
    :ivar num_predictions: Predictions routed to the split (after deduplication).
    """
    f1_at_5: Scores
    f1_at_m: Scores
    micro_recall: float
    num_correct: int
    num_gold: int
    num_predictions: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "f1@5": self.f1_at_5._asdict(),
            "f1@M": self.f1_at_m._asdict(),
            "micro_recall": self.micro_recall,
            "num_correct": self.num_correct,
            "num_gold": self.num_gold,
            "num_predictions": self.num_predictions,
        }

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "SplitMetrics":
        return cls(
            Scores(**obj["f1@5"]),
            Scores(**obj["f1@M"]),
            float(obj["micro_recall"]),
            int(obj["num_correct"]),
            int(obj["num_gold"]),
            int(obj["num_predictions"]),
        )


@dataclass
class MetricsReport:
    """
    Evaluation of a prediction file against labeled gold data.

    :ivar match_config: Normalization used for matching and deduplication.
    :ivar num_documents: Number of documents evaluated.
    :ivar splits: Scores of each split.
    :ivar num_raw_predictions: Predictions as emitted, duplicates included.
    :ivar num_normalized_predictions: Predictions left after normalized deduplication.
    :ivar documents: One row per document (id, sentence count, F1@5 and F1@M per split).
    :ivar config: Run configuration that produced the report.
    """
    match_config: MatchConfig
    num_documents: int
    splits: Dict[str, SplitMetrics]
    num_raw_predictions: int
    num_normalized_predictions: int
    documents: List[Dict[str, Any]] = field(default_factory=list)
    config: Optional[Dict[str, Any]] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "config": self.config,
            "match_config": asdict(self.match_config),
            "num_documents": self.num_documents,
            "num_raw_predictions": self.num_raw_predictions,
            "num_normalized_predictions": self.num_normalized_predictions,
            "splits": {name: metrics.to_json() for name, metrics in self.splits.items()},
            "documents": self.documents,
        }

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "MetricsReport":
        """
        Create a report from its JSON form.

        :param obj: Decoded JSON object.
        :type obj: dict

        :return: The report.
        :rtype: MetricsReport

        :raises ValueError: If the version is unknown or a field is missing.
        """
        version = obj.get("format_version")
        if version != REPORT_FORMAT_VERSION:
            raise ValueError(f"MetricsReport.from_json(obj) -- Unsupported report version: {version}")
        try:
            return cls(
                MatchConfig(**obj["match_config"]),
                int(obj["num_documents"]),
                {name: SplitMetrics.from_json(metrics) for name, metrics in obj["splits"].items()},
                int(obj["num_raw_predictions"]),
                int(obj["num_normalized_predictions"]),
                list(obj.get("documents", [])),
                obj.get("config"),
            )
        except (KeyError, TypeError) as error:
            raise ValueError(f"MetricsReport.from_json(obj) -- Invalid report: {error!r}")


class Evaluator:
    """
    Used to score predicted keyphrases against labeled documents.

    :param match_config: Normalization used for matching and deduplication.
    :type match_config: MatchConfig
    """
    def __init__(self, match_config: MatchConfig = MatchConfig()):
        self.match_config = match_config

    def evaluate_document(self, example: LabeledExample, predictions: Sequence[Sequence[str]]) -> Dict[str, Any]:
        """
        Score the predictions of one document in every split.

        :param example: Labeled gold document.
        :type example: LabeledExample
        :param predictions: Predicted keyphrases in rank order (present block first).
        :type predictions: list[list[str]]

        :return: Document row with, per split, the F1@5 and F1@M scores and the counts.
        :rtype: dict
        """
        doc = example.document
        routed = split_eval(doc, predictions, doc.keyphrases, example.categories)

        splits = {}
        for name in SPLITS:
            split = routed[name]
            gold = dedup_phrases(split.gold, self.match_config)
            preds = dedup_phrases(split.predictions, self.match_config)
            splits[name] = {
                "f1@5": f1_at_5(preds, gold, self.match_config)._asdict(),
                "f1@M": f1_at_m(preds, gold, self.match_config)._asdict(),
                "num_correct": count_matches(preds, gold, self.match_config),
                "num_gold": len(gold),
                "num_predictions": len(preds),
            }

        return {
            "id": doc.id,
            "num_sentences": doc.num_sentences,
            "num_raw_predictions": len(predictions),
            "num_normalized_predictions": len(dedup_phrases(predictions, self.match_config)),
            "splits": splits,
        }

    def evaluate(
        self,
        examples: Sequence[LabeledExample],
        predictions: Sequence[Sequence[Sequence[str]]],
        config: Optional[Dict[str, Any]] = None
    ) -> MetricsReport:
        """
        Score a corpus of predictions.

        Scores are averaged over all documents, documents without gold in a split
        counting as 0 in that split.

        :param examples: Labeled gold documents.
        :type examples: list[LabeledExample]
        :param predictions: Predicted keyphrases of each document, aligned with examples.
        :type predictions: list[list[list[str]]]
        :param config: Run configuration embedded in the report.
        :type config: dict, optional

        :return: The report.
        :rtype: MetricsReport

        :raises ValueError: If examples and predictions are not aligned or are empty.
        """
        if len(examples) != len(predictions):
            raise ValueError(f"Evaluator.evaluate(predictions) -- Expected {len(examples)} prediction lists, got: {len(predictions)}")
        if not examples:
            raise ValueError("Evaluator.evaluate(examples) -- Nothing to evaluate")

        rows = [self.evaluate_document(example, preds) for example, preds in zip(examples, predictions)]

        splits = {}
        for name in SPLITS:
            cells = [row["splits"][name] for row in rows]
            num_gold = sum(cell["num_gold"] for cell in cells)
            num_correct = sum(cell["num_correct"] for cell in cells)
            if num_gold == 0:
                logger.warning("no gold keyphrase in split, scores reported as 0 split=%s", name)

            splits[name] = SplitMetrics(
                Scores(*(float(v) for v in np.mean([list(cell["f1@5"].values()) for cell in cells], axis=0))),
                Scores(*(float(v) for v in np.mean([list(cell["f1@M"].values()) for cell in cells], axis=0))),
                num_correct / num_gold if num_gold else 0.0,
                num_correct,
                num_gold,
                sum(cell["num_predictions"] for cell in cells),
            )

        report = MetricsReport(
            self.match_config,
            len(rows),
            splits,
            sum(row["num_raw_predictions"] for row in rows),
            sum(row["num_normalized_predictions"] for row in rows),
            rows,
            config,
        )
        logger.info(
            "evaluation done documents=%d present_f1@5=%.4f present_f1@M=%.4f absent_f1@5=%.4f absent_f1@M=%.4f",
            report.num_documents,
            splits[PRESENT_SPLIT].f1_at_5.f1, splits[PRESENT_SPLIT].f1_at_m.f1,
            splits[ABSENT_SPLIT].f1_at_5.f1, splits[ABSENT_SPLIT].f1_at_m.f1,
        )
        return report
