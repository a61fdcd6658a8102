"""
jsonl.py
========

This module reads and writes JSON-lines files.

Modules
-------
jsonl
    Handle JSON-lines parsing.
"""

import json
import os
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar

T = TypeVar("T")


def read_jsonl(path: str, parse: Optional[Callable[[Dict[str, Any]], T]] = None) -> List[T]:
    """
    Read a JSON-lines file, one object per non-blank line.

    :param path: Path of the file.
    :type path: str
    :param parse: Applied to each decoded object (identity if not provided).
    :type parse: Callable[[dict], T], optional

    :returns: The parsed records in file order.
    :rtype: list

    :raises FileNotFoundError: If the file does not exist.
    :raises ValueError: If a line is not valid JSON or is rejected by ``parse``; the
        message names the file and the 1-based line number.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"The specified JSON-lines file was not found: '{path}'")

    records = []
    with open(path, "r", encoding="utf-8") as file:
        for line_number, line in enumerate(file, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                records.append(parse(obj) if parse is not None else obj)
            except (AttributeError, KeyError, TypeError, ValueError) as error:
                raise ValueError(f"{path}:{line_number} -- Invalid record: {error}") from error

    return records


def write_jsonl(path: str, records: Iterable[Dict[str, Any]]) -> int:
    """
    Write objects to a JSON-lines file.

    :param path: Output path.
    :type path: str
    :param records: JSON-compatible objects.
    :type records: Iterable[dict]

    :returns: Number of lines written.
    :rtype: int

    :raises OSError: If writing to the file fails.
    """
    count = 0
    with open(path, "w", encoding="utf-8") as file:
        for record in records:
            file.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count
