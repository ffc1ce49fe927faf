"""Canonical JSON: sorted keys, two-space indent, trailing newline.

Used everywhere artifacts are written so deterministic runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write(path, obj):
    Path(path).write_text(dumps(obj))


def read(path):
    return json.loads(Path(path).read_text())
