"""Newline-delimited record streams (``.ndrec``).

Each line is one JSON object describing one save. Every record carries its
time ``t`` and iteration ``it``; arrays are stored as JSON lists. Floats are
written with the shortest decimal that round-trips, so reading back gives the
same bits. Streams are append-only.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import RecordsError


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dumps_record(record):
    return json.dumps(_plain(record), separators=(", ", ": "))


def append_record(path, record):
    line = dumps_record(record)
    with open(path, "a", encoding="utf-8") as f:
        f.write(line + "\n")
        f.flush()


def read_records(path):
    path = Path(path)
    if not path.exists():
        raise RecordsError(f"no record stream at {path}")
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise RecordsError(f"{path}:{lineno}: malformed record ({exc})") from None
    return records
