"""
cli.py
======

This module is the command-line entry point of the pipeline.

Modules
-------
cli
    Handle the command-line entry point.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from ..data.constants import DEFAULT_VOCAB_SIZE, MAX_SOURCE_LENGTH
from ..features.constants import NUM_BUCKETS, SPLITS
from ..model import constants as model_constants
from ..training import constants as train_constants
from .API import API
from .config import RunConfig

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON config file {\"model\": {...}, \"train\": {...}, \"match\": {...}}; command-line flags take precedence")
    parser.add_argument("--log-level", default="INFO", choices=LOG_LEVELS, help="logging level (default: INFO)")


def _add_match(parser: argparse.ArgumentParser):
    parser.add_argument("--stemmer", choices=("porter", "none"), help="stemmer applied before matching and deduplication (default: porter)")
    parser.add_argument("--no-lowercase", dest="lowercase", action="store_const", const=False, help="compare keyphrases without lowercasing")


def _add_model(parser: argparse.ArgumentParser):
    parser.add_argument("--embed-dim", type=int, help=f"word embedding width (default: {model_constants.EMBED_DIM})")
    parser.add_argument("--hidden-dim", type=int, help=f"encoder state width, both directions (default: {model_constants.HIDDEN_DIM})")
    parser.add_argument("--significance-embed-dim", type=int, help=f"significance embedding width, must equal --hidden-dim (default: {model_constants.SIGNIFICANCE_EMBED_DIM})")
    parser.add_argument("--cnn-kernel-sizes", type=int, nargs="+", help=f"sentence convolution window sizes (default: {' '.join(map(str, model_constants.CNN_KERNEL_SIZES))})")
    parser.add_argument("--cnn-channels", type=int, help=f"filters per window size (default: {model_constants.CNN_CHANNELS})")
    parser.add_argument("--selector-mlp-hidden", type=int, help=f"selector MLP width (default: {model_constants.SELECTOR_MLP_HIDDEN})")
    parser.add_argument("--gate-threshold", type=float, help=f"sentence gate threshold (default: {model_constants.GATE_THRESHOLD})")
    parser.add_argument("--max-decode-len", type=int, help=f"maximum greedy decoding steps (default: {model_constants.MAX_DECODE_LENGTH})")
    parser.add_argument("--encoder-type", choices=model_constants.ENCODER_TYPES, help="recurrent encoder cell (default: gru)")
    parser.add_argument("--selector-input", choices=model_constants.SELECTOR_INPUTS, help="rows read by the sentence convolutions (default: embedding)")
    parser.add_argument("--no-selector", dest="use_selector", action="store_const", const=False, help="train the plain copy-attention backbone without sentence gate")
    parser.add_argument("--no-copy", dest="copy_attention", action="store_const", const=False, help="disable the copy pathway")


def _add_train(parser: argparse.ArgumentParser):
    parser.add_argument("--lambda", dest="lambda_bce", type=float, help=f"weight of the sentence-label loss (default: {train_constants.LAMBDA_BCE})")
    parser.add_argument("--lr", dest="learning_rate", type=float, help=f"Adam learning rate (default: {train_constants.LEARNING_RATE})")
    parser.add_argument("--batch-size", type=int, help=f"examples per step (default: {train_constants.BATCH_SIZE})")
    parser.add_argument("--epochs", dest="max_epochs", type=int, help=f"maximum epochs (default: {train_constants.MAX_EPOCHS})")
    parser.add_argument("--clip-norm", type=float, help=f"gradient norm clip (default: {train_constants.CLIP_NORM})")
    parser.add_argument("--seed", type=int, help=f"seed of initialization and batch order (default: {train_constants.SEED})")
    parser.add_argument("--init-range", type=float, help=f"uniform initialization half-width (default: {train_constants.INIT_RANGE})")
    parser.add_argument("--validation-interval", type=int, help=f"epochs between validations (default: {train_constants.VALIDATION_INTERVAL})")
    parser.add_argument("--patience", type=int, help=f"validations without improvement before stopping (default: {train_constants.PATIENCE})")


MODEL_KEYS = (
    "embed_dim", "hidden_dim", "significance_embed_dim", "cnn_kernel_sizes", "cnn_channels", "selector_mlp_hidden",
    "gate_threshold", "max_decode_len", "encoder_type", "selector_input", "use_selector", "copy_attention",
)
TRAIN_KEYS = (
    "lambda_bce", "learning_rate", "batch_size", "max_epochs", "clip_norm", "seed", "init_range",
    "validation_interval", "patience",
)
MATCH_KEYS = ("stemmer", "lowercase")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m src", description="Sentence-selective keyphrase generation pipeline.")
    commands = parser.add_subparsers(dest="command", required=True)

    command = commands.add_parser("preprocess", help="tokenize raw records and build the vocabulary")
    command.add_argument("--input", required=True, help="JSON-lines records with title, abstract and keywords")
    command.add_argument("--output", required=True, help="JSON-lines documents")
    command.add_argument("--vocab-size", type=int, default=DEFAULT_VOCAB_SIZE, help=f"maximum regular vocabulary tokens (default: {DEFAULT_VOCAB_SIZE})")
    command.add_argument("--vocab-out", help="where to write the vocabulary")
    command.add_argument("--max-length", type=int, default=MAX_SOURCE_LENGTH, help=f"maximum source tokens (default: {MAX_SOURCE_LENGTH})")
    _add_common(command)

    command = commands.add_parser("label", help="classify keyphrases and derive weak sentence labels")
    command.add_argument("--input", required=True, help="JSON-lines documents")
    command.add_argument("--output", required=True, help="JSON-lines labeled documents")
    _add_common(command)

    command = commands.add_parser("stats", help="corpus sentence and keyphrase statistics")
    command.add_argument("--input", required=True, help="JSON-lines labeled documents")
    command.add_argument("--report", required=True, help="JSON statistics report")
    _add_common(command)

    command = commands.add_parser("train", help="train the generator")
    command.add_argument("--data", required=True, help="JSON-lines labeled training documents")
    command.add_argument("--val", required=True, help="JSON-lines labeled validation documents")
    command.add_argument("--vocab", required=True, help="vocabulary file")
    command.add_argument("--out", required=True, help="output directory")
    command.add_argument("--resume-from", help="checkpoint to continue from")
    _add_model(command)
    _add_train(command)
    _add_match(command)
    _add_common(command)

    command = commands.add_parser("predict", help="greedy-decode keyphrases")
    command.add_argument("--checkpoint", required=True, help="checkpoint file")
    command.add_argument("--input", required=True, help="JSON-lines documents")
    command.add_argument("--output", required=True, help="JSON-lines predictions")
    _add_match(command)
    _add_common(command)

    command = commands.add_parser("eval", help="score predictions")
    command.add_argument("--pred", required=True, help="JSON-lines predictions")
    command.add_argument("--gold", required=True, help="JSON-lines labeled gold documents")
    command.add_argument("--report", required=True, help="JSON metrics report")
    _add_match(command)
    _add_common(command)

    command = commands.add_parser("analyze", help="compare two reports by sentence-count bucket")
    command.add_argument("--baseline", required=True, help="metrics report of the baseline")
    command.add_argument("--treatment", required=True, help="metrics report of the compared system")
    command.add_argument("--buckets", type=int, default=NUM_BUCKETS, help=f"number of quantile buckets (default: {NUM_BUCKETS})")
    command.add_argument("--split", choices=SPLITS, default=SPLITS[0], help=f"split compared (default: {SPLITS[0]})")
    command.add_argument("--output", help="JSON analysis report")
    _add_common(command)

    command = commands.add_parser("dump-attention", help="attention under natural and forced gates")
    command.add_argument("--checkpoint", required=True, help="checkpoint file")
    command.add_argument("--input", required=True, help="JSON-lines documents")
    command.add_argument("--out", required=True, help="JSON attention dump")
    command.add_argument("--limit", type=int, help="dump only the first documents")
    _add_match(command)
    _add_common(command)

    return parser


def _section(args: argparse.Namespace, keys) -> Dict[str, Any]:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def _dispatch(api: API, args: argparse.Namespace) -> str:
    commands: Dict[str, Callable[[], str]] = {
        "preprocess": lambda: api.preprocess(args.input, args.output, args.vocab_size, args.vocab_out, args.max_length),
        "label": lambda: api.label(args.input, args.output),
        "stats": lambda: api.stats(args.input, args.report),
        "train": lambda: api.train(args.data, args.val, args.vocab, args.out, args.resume_from),
        "predict": lambda: api.predict(args.checkpoint, args.input, args.output),
        "eval": lambda: api.evaluate(args.pred, args.gold, args.report),
        "analyze": lambda: api.analyze(args.baseline, args.treatment, args.output, args.buckets, args.split),
        "dump-attention": lambda: api.dump_attention(args.checkpoint, args.input, args.out, args.limit),
    }
    return commands[args.command]()


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one pipeline command.

    :param argv: Command-line arguments (``sys.argv[1:]`` if not provided).
    :type argv: list[str], optional

    :returns: 0 on success, 1 on a failure reported as ``{"error", "message"}`` JSON on
        stderr, 2 on invalid usage.
    :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return int(stop.code or 0)

    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s %(message)s", stream=sys.stderr)

    paths = {
        key: value for key, value in vars(args).items()
        if key in ("input", "output", "vocab_out", "report", "data", "val", "vocab", "out", "resume_from",
                   "checkpoint", "pred", "gold", "baseline", "treatment")
    }
    try:
        config = RunConfig.build(
            args.command,
            args.config,
            {
                "model": _section(args, MODEL_KEYS),
                "train": _section(args, TRAIN_KEYS),
                "match": _section(args, MATCH_KEYS),
            },
            paths,
        )
        print(_dispatch(API(config), args))
    except (FileNotFoundError, ValueError, RuntimeError, OSError) as error:
        logger.debug("command failed", exc_info=True)
        print(json.dumps({"error": type(error).__name__, "message": str(error)}), file=sys.stderr)
        return 1

    return 0
