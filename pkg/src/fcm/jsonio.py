"""Deterministic JSON serialization for run artifacts.

Keys are sorted and floats are written with 17 significant digits so that
identical inputs, config, and seed produce byte-identical files.
"""
from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Any, Mapping

import numpy as np


def _format(value: Any) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("non-finite float in artifact payload")
        return format(value, ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, Mapping):
        parts = (f"{json.dumps(str(k), ensure_ascii=False)}: {_format(v)}"
                 for k, v in sorted(value.items(), key=lambda kv: str(kv[0])))
        return "{" + ", ".join(parts) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_format(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def dumps(payload: Any) -> str:
    return _format(payload)


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def atomic_write_bytes(path: str | Path, blob: bytes) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(blob)
    os.replace(tmp, path)


def dump(payload: Any, path: str | Path) -> None:
    atomic_write_text(path, dumps(payload) + "\n")


def load(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
