"""Deterministic CSV output and run-manifest sidecars."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np


def format_value(x):
    """Shortest round-trip representation; identical inputs give identical text."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path, header, columns):
    """Write equal-length columns with a header row, '.' decimals and '\\n' line endings."""
    columns = [np.asarray(c) for c in columns]
    n = {len(c) for c in columns}
    if len(n) != 1:
        raise ValueError("columns must have equal length")
    if len(header) != len(columns):
        raise ValueError("header and columns differ in length")
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(format_value(v) for v in row))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path):
    text = Path(path).read_text().strip().split("\n")
    header = text[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    return header, data


@dataclass
class RunManifest:
    subcommand: str
    config_hash: str
    config_path: Optional[str]
    seed: Optional[int]
    overrides: dict
    outputs: list
    results: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0
    started: str = ""

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = asdict(self)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_default) + "\n")
        return path


def _default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "tolist"):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(type(o).__name__)


def now_iso():
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
