"""Deterministic report rendering.

Keys are sorted and floats are written with 17 significant digits, so equal
inputs give byte-identical bodies. Non-finite floats become the strings
"inf", "-inf" and "nan".
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import Exponent

__all__ = ["to_plain", "render", "write_report", "write_table"]


def to_plain(obj):
    """Convert reports, arrays and exponents into JSON-ready values."""
    if isinstance(obj, Exponent):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "signs"):
        return list(obj.signs)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _number(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def render(obj, indent: int = 2, _level: int = 0) -> str:
    obj = to_plain(obj) if _level == 0 else obj
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {render(obj[k], indent, _level + 1)}"
                 for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(render(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + render(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _number(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


def write_report(path: Path, body: dict) -> str:
    """Write {"body", "body_sha256", "meta"}; return the rendered body."""
    text = render(body)
    digest = hashlib.sha256(text.encode()).hexdigest()
    meta = {"generated_at": datetime.now(timezone.utc).isoformat()}
    doc = ('{\n  "body": ' + text.replace("\n", "\n  ")
           + ',\n  "body_sha256": ' + json.dumps(digest)
           + ',\n  "meta": ' + render(meta).replace("\n", "\n  ") + "\n}\n")
    Path(path).write_text(doc)
    return text


def write_table(path: Path, header: list, rows: list):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    Path(path).write_text(buf.getvalue())
