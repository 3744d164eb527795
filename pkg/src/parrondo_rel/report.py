"""Serialisation of CLI reports to JSON, CSV and plain text."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from typing import Any, Sequence

import numpy as np

SCHEMA_VERSION = 1
# excluded from determinism comparisons
TIMESTAMP_KEY = "generated_at"


def format_float(x: float) -> str:
    """17 significant digits; integral values keep a ``.0`` so they parse back as floats."""
    text = format(float(x), ".17g")
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def _plain(obj: Any) -> Any:
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    obj = _plain(obj)
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(payload: dict, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits (exact round trip)."""
    return _encode(payload, indent, 0) + "\n"


def _csv_cell(value: Any) -> Any:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value) if math.isfinite(value) else ""
    if isinstance(value, (dict, list)):
        return to_json(value, indent=0).replace("\n", "")
    return value


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    """RFC 4180 style: CRLF line ends, fields quoted only when needed."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def to_text(title: str, fields: Sequence[tuple[str, Any]]) -> str:
    width = max((len(k) for k, _ in fields), default=0)
    lines = [title]
    for key, value in fields:
        value = _plain(value)
        if isinstance(value, float):
            value = f"{value:.12g}"
        lines.append(f"  {key.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"
