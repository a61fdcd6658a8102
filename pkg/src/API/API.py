import json
import logging
import os
from typing import Any, Dict, List, Optional

from ..data import (
    Document, LabeledExample, RawRecord, Vocab, build_vocab, corpus_stats, encode_example, label_document, read_jsonl,
    write_jsonl,
)
from ..data.constants import DEFAULT_VOCAB_SIZE, MAX_SOURCE_LENGTH
from ..features import Evaluator, MetricsReport, analysis_report, attention_dump, bucket_analysis
from ..features.constants import NUM_BUCKETS, PRESENT_SPLIT
from ..model import load_checkpoint
from ..training import train
from .config import RunConfig

logger = logging.getLogger(__name__)


def _write_json(path: str, content: Dict[str, Any]):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as file:
        json.dump(content, file, indent=4, ensure_ascii=False)


def _read_json(path: str, kind: str) -> Dict[str, Any]:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"The specified {kind} file was not found: '{path}'")
    with open(path, "r", encoding="utf-8") as file:
        try:
            return json.load(file)
        except json.JSONDecodeError as error:
            raise ValueError(f"{path} -- Invalid JSON: {error}")


def _phrases(values: Any) -> List[List[str]]:
    if not isinstance(values, list):
        raise ValueError(f"Expected a list of keyphrases: {values!r}")
    return [str(value).split() for value in values if str(value).strip()]


class API:
    """
    Pipeline commands. Every command reads and writes files and returns a JSON
    formatted summary of what it did.

    :param config: Configuration of the run, embedded in the artifacts.
    :type config: RunConfig
    """
    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig()

    def _summary(self, content: Dict[str, Any]) -> str:
        return json.dumps({"command": self.config.command, **content}, indent=4)

    def preprocess(
        self,
        input_path: str,
        output_path: str,
        vocab_size: int = DEFAULT_VOCAB_SIZE,
        vocab_out: Optional[str] = None,
        max_length: int = MAX_SOURCE_LENGTH
    ) -> str:
        """
        Tokenize raw records into documents and optionally build the vocabulary.

        Records whose first sentence alone is longer than ``max_length`` are skipped.

        .. code-block:: json

            {
                "command": "preprocess",
                "records": 64,
                "documents": 63,
                "skipped": 1,
                "vocab_size": 412
            }

        :param input_path: JSON-lines file of ``{"title", "abstract", "keywords"}`` records.
        :type input_path: str
        :param output_path: JSON-lines file of documents.
        :type output_path: str
        :param vocab_size: Maximum number of regular vocabulary tokens.
        :type vocab_size: int
        :param vocab_out: Where to write the vocabulary built from the documents.
        :type vocab_out: str, optional
        :param max_length: Maximum number of source tokens.
        :type max_length: int

        :returns: JSON formatted summary.
        :rtype: str

        :raises FileNotFoundError: If the input file does not exist.
        :raises ValueError: If a record is invalid (the message names its line).
        """
        records = read_jsonl(input_path, RawRecord.from_json)

        documents = []
        skipped = 0
        for record in records:
            try:
                documents.append(Document.from_record(record, max_length))
            except ValueError as error:
                skipped += 1
                logger.warning("record skipped id=%s reason=%s", record.id, error)

        write_jsonl(output_path, (doc.to_json() for doc in documents))

        size = None
        if vocab_out is not None:
            vocab = build_vocab(documents, vocab_size)
            vocab.save(vocab_out)
            size = len(vocab)

        logger.info("preprocess done records=%d documents=%d skipped=%d", len(records), len(documents), skipped)
        return self._summary({"records": len(records), "documents": len(documents), "skipped": skipped, "vocab_size": size})

    def label(self, input_path: str, output_path: str) -> str:
        """
        Classify the keyphrases of preprocessed documents and add weak sentence labels.

        :returns: JSON formatted summary (documents written).
        :rtype: str
        """
        documents = read_jsonl(input_path, Document.from_json)
        count = write_jsonl(output_path, (label_document(doc).to_json() for doc in documents))
        logger.info("label done documents=%d", count)
        return self._summary({"documents": count})

    def stats(self, input_path: str, report_path: str) -> str:
        """
        Sentence and keyphrase statistics of a labeled corpus.

        :returns: JSON formatted statistics, also written to ``report_path``.
        :rtype: str
        """
        stats = corpus_stats(read_jsonl(input_path, LabeledExample.from_json)).to_json()
        _write_json(report_path, {"config": self.config.to_json(), **stats})
        return self._summary(stats)

    def train(
        self,
        data_path: str,
        val_path: str,
        vocab_path: str,
        out_dir: str,
        resume_from: Optional[str] = None
    ) -> str:
        """
        Train a generator on labeled data.

        :param data_path: Labeled training examples.
        :type data_path: str
        :param val_path: Labeled validation examples.
        :type val_path: str
        :param vocab_path: Vocabulary file.
        :type vocab_path: str
        :param out_dir: Directory receiving ``train_log.jsonl``, ``best.ckpt`` and ``last.ckpt``.
        :type out_dir: str
        :param resume_from: Checkpoint to continue from.
        :type resume_from: str, optional

        :returns: JSON formatted summary with the best checkpoint path.
        :rtype: str
        """
        vocab = Vocab.load(vocab_path)
        dataset = read_jsonl(data_path, LabeledExample.from_json)
        val_dataset = read_jsonl(val_path, LabeledExample.from_json)

        best = train(
            dataset,
            val_dataset,
            vocab,
            self.config.model_config(len(vocab)),
            self.config.train,
            out_dir,
            self.config.match,
            resume_from,
            self.config.to_json(),
        )
        return self._summary({"best_checkpoint": best})

    def predict(self, checkpoint_path: str, input_path: str, output_path: str) -> str:
        """
        Greedy-decode keyphrases for every document of a file.

        Each output line holds the document id, its present and absent keyphrases
        (tokens joined by spaces), and the probability and gate of every sentence.

        :returns: JSON formatted summary (documents written).
        :rtype: str
        """
        checkpoint = load_checkpoint(checkpoint_path)
        model, vocab = checkpoint.model, checkpoint.vocab
        documents = read_jsonl(input_path, Document.from_json)

        def lines():
            for doc in documents:
                prediction = model.greedy_decode(encode_example(doc, vocab), vocab, self.config.match)
                yield {"id": doc.id, **prediction.to_json()}

        count = write_jsonl(output_path, lines())
        logger.info("predict done documents=%d", count)
        return self._summary({"documents": count})

    def evaluate(self, pred_path: str, gold_path: str, report_path: str) -> str:
        """
        Score predictions against labeled gold documents (aligned line by line).

        :returns: JSON formatted corpus scores, the full report being written to ``report_path``.
        :rtype: str

        :raises ValueError: If the files are not aligned.
        """
        gold = read_jsonl(gold_path, LabeledExample.from_json)
        predictions = read_jsonl(pred_path)
        if len(gold) != len(predictions):
            raise ValueError(f"API.evaluate(pred_path) -- {len(predictions)} predictions for {len(gold)} gold documents")

        keyphrases = []
        for line_number, (example, record) in enumerate(zip(gold, predictions), start=1):
            if record.get("id") is not None and example.document.id is not None and str(record["id"]) != example.document.id:
                raise ValueError(f"{pred_path}:{line_number} -- Prediction id {record['id']} does not match gold id {example.document.id}")
            try:
                keyphrases.append(_phrases(record.get("present", [])) + _phrases(record.get("absent", [])))
            except ValueError as error:
                raise ValueError(f"{pred_path}:{line_number} -- Invalid record: {error}")

        report = Evaluator(self.config.match).evaluate(gold, keyphrases, self.config.to_json())
        content = report.to_json()
        _write_json(report_path, content)
        return self._summary({"splits": content["splits"]})

    def analyze(
        self,
        baseline_path: str,
        treatment_path: str,
        output_path: Optional[str] = None,
        num_buckets: int = NUM_BUCKETS,
        split: str = PRESENT_SPLIT
    ) -> str:
        """
        Relative gains of a treatment over a baseline by sentence-count bucket.

        :returns: JSON formatted bucket analysis.
        :rtype: str
        """
        baseline = MetricsReport.from_json(_read_json(baseline_path, "report"))
        treatment = MetricsReport.from_json(_read_json(treatment_path, "report"))
        content = analysis_report(bucket_analysis(baseline, treatment, num_buckets, split=split), split)
        if output_path is not None:
            _write_json(output_path, {"config": self.config.to_json(), **content})
        return self._summary(content)

    def dump_attention(self, checkpoint_path: str, input_path: str, output_path: str, limit: Optional[int] = None) -> str:
        """
        Attention of every document under natural, all-significant and all-irrelevant gates.

        :returns: JSON formatted summary (documents dumped).
        :rtype: str
        """
        checkpoint = load_checkpoint(checkpoint_path)
        documents = read_jsonl(input_path, Document.from_json)
        if limit is not None:
            documents = documents[:limit]

        dumps = [attention_dump(checkpoint.model, doc, checkpoint.vocab, self.config.match) for doc in documents]
        _write_json(output_path, {"config": self.config.to_json(), "documents": dumps})
        return self._summary({"documents": len(dumps)})
