"""
config.py
=========

This module merges the configuration of a run.

Modules
-------
API
    Handle the pipeline commands.
cli
    Handle the command-line entry point.
config
    Handle the merged run configuration.
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Optional

from ..data import MatchConfig
from ..model import ModelConfig
from ..training import TrainConfig

SECTIONS = ("model", "train", "match")


@dataclass
class RunConfig:
    """
    Merged view of the network, optimization and matching settings with the paths of a run.

    The network settings are kept as overrides since the vocabulary size is only
    known once a vocabulary is loaded.

    :ivar command: Subcommand being run.
    :vartype command: str
    :ivar model: ModelConfig fields overriding the defaults.
    :vartype model: dict
    :ivar train: Optimization settings.
    :vartype train: TrainConfig
    :ivar match: Keyphrase normalization.
    :vartype match: MatchConfig
    :ivar paths: Input and output paths of the command.
    :vartype paths: dict[str, str]
    """
    command: str = ""
    model: Dict[str, Any] = field(default_factory=dict)
    train: TrainConfig = field(default_factory=TrainConfig)
    match: MatchConfig = field(default_factory=MatchConfig)
    paths: Dict[str, Optional[str]] = field(default_factory=dict)

    def model_config(self, vocab_size: int) -> ModelConfig:
        return ModelConfig.from_json({**self.model, "vocab_size": vocab_size})

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "model": dict(self.model),
            "train": self.train.to_json(),
            "match": asdict(self.match),
            "paths": dict(self.paths),
        }

    @classmethod
    def build(
        cls,
        command: str,
        config_path: Optional[str] = None,
        overrides: Optional[Dict[str, Dict[str, Any]]] = None,
        paths: Optional[Dict[str, Optional[str]]] = None
    ) -> "RunConfig":
        """
        Merge built-in defaults, a JSON config file and command-line overrides, in
        increasing order of precedence.

        The config file holds up to three objects: ``{"model": {...}, "train": {...}, "match": {...}}``.

        :param command: Subcommand being run.
        :type command: str
        :param config_path: JSON config file.
        :type config_path: str, optional
        :param overrides: Values given on the command line, per section (None values are ignored).
        :type overrides: dict[str, dict], optional
        :param paths: Input and output paths of the command.
        :type paths: dict[str, str], optional

        :returns: The merged configuration.
        :rtype: RunConfig

        :raises FileNotFoundError: If the config file does not exist.
        :raises ValueError: If the file is not valid JSON, has an unknown section or key, or a value is invalid.
        """
        merged: Dict[str, Dict[str, Any]] = {section: {} for section in SECTIONS}

        if config_path is not None:
            if not os.path.isfile(config_path):
                raise FileNotFoundError(f"The specified config file was not found: '{config_path}'")
            with open(config_path, "r", encoding="utf-8") as file:
                try:
                    content = json.load(file)
                except json.JSONDecodeError as error:
                    raise ValueError(f"RunConfig.build(config_path) -- Invalid JSON in '{config_path}': {error}")
            if not isinstance(content, dict):
                raise ValueError(f"RunConfig.build(config_path) -- Expected a JSON object in '{config_path}'")
            for section, values in content.items():
                if section not in SECTIONS or not isinstance(values, dict):
                    raise ValueError(f"RunConfig.build(config_path) -- Unknown or invalid section, expected one of {SECTIONS}: {section}")
                merged[section].update(values)

        for section, values in (overrides or {}).items():
            merged[section].update({key: value for key, value in values.items() if value is not None})

        if "vocab_size" in merged["model"]:
            raise ValueError("RunConfig.build(model) -- vocab_size comes from the vocabulary and cannot be configured")

        known = {
            "model": {f.name for f in fields(ModelConfig)} - {"vocab_size"},
            "train": {f.name for f in fields(TrainConfig)},
            "match": {f.name for f in fields(MatchConfig)},
        }
        for section in SECTIONS:
            unknown = sorted(set(merged[section]) - known[section])
            if unknown:
                raise ValueError(f"RunConfig.build({section}) -- Unknown keys: {unknown}")

        config = cls(command, merged["model"], TrainConfig(**merged["train"]), MatchConfig(**merged["match"]), dict(paths or {}))
        # Fails early on invalid network settings
        config.model_config(1)
        return config
