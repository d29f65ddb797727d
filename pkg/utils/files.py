"""
File codecs: set files, Signal JSON, CSV tables and 17-digit JSON reports.
"""
import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import BaseModel

from exceptions import MalformedInputError
from models.signal import Signal


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def make_json_safe(obj: Any) -> Any:
    """Convert reports, arrays, Fractions and complex numbers to plain JSON types."""
    if isinstance(obj, Signal):
        return signal_payload(obj)
    if isinstance(obj, BaseModel):
        return make_json_safe(obj.model_dump(by_alias=True))
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [make_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _encode(obj: Any, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _encode(v, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, float):
        return format_float(obj)
    return json.dumps(obj)


def dumps(obj: Any) -> str:
    """Two-space indented JSON with every float at 17 significant digits."""
    return _encode(make_json_safe(obj), 0) + "\n"


def write_json(obj: Any, path: Path | str) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_set(path: Path | str) -> list[int]:
    """
    Read ascending integers, one per line; blank lines and # comments are skipped.

    Raises:
        MalformedInputError: For unreadable files, non-integers, duplicates or unsorted lines
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise MalformedInputError(f"cannot read set file {path}: {exc}") from exc
    elements: list[int] = []
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            value = int(text)
        except ValueError:
            raise MalformedInputError(f"{path}:{number}: not an integer: {text!r}") from None
        if elements and value <= elements[-1]:
            raise MalformedInputError(f"{path}:{number}: {value} is not above {elements[-1]}")
        elements.append(value)
    return elements


def write_set(elements: Iterable[int], path: Path | str) -> None:
    Path(path).write_text("".join(f"{int(x)}\n" for x in sorted(set(elements))), encoding="utf-8")


def signal_payload(f: Signal) -> dict:
    """{"offset", "re", "im"} with "im" dropped for real signals."""
    values = f.as_complex()
    payload: dict[str, Any] = {"offset": f.offset, "re": [float(v) for v in values.real]}
    if np.any(values.imag != 0):
        payload["im"] = [float(v) for v in values.imag]
    return payload


def read_signal(path: Path | str) -> Signal:
    """
    Load a Signal from JSON, or a set file (anything not ending in .json) as its indicator.

    Raises:
        MalformedInputError: For unreadable or inconsistent files
    """
    path = Path(path)
    if path.suffix.lower() != ".json":
        return Signal.indicator(read_set(path))
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise MalformedInputError(f"cannot read signal file {path}: {exc}") from exc
    if not isinstance(payload, dict) or "re" not in payload:
        raise MalformedInputError(f"{path}: expected an object with 'offset' and 're'")
    try:
        offset = int(payload.get("offset", 0))
        re = np.asarray(payload["re"], dtype=np.float64)
        im = np.asarray(payload.get("im", np.zeros_like(re)), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{path}: non-numeric signal values") from exc
    if re.ndim != 1 or re.shape != im.shape:
        raise MalformedInputError(f"{path}: 're' and 'im' must be lists of equal length")
    return Signal.from_values(offset, re + 1j * im)


def write_signal(f: Signal, path: Path | str) -> None:
    write_json(signal_payload(f), path)


def _cell(value: Any) -> str:
    value = make_json_safe(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Header plus rows, comma separated, floats at 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def write_text(text: str, path: Path | str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def write_witnesses(witnesses: Iterable[Any], path: Path | str) -> None:
    """One ``x,y`` row per configuration, under an ``x,y`` header."""
    write_text(csv_text(("x", "y"), ((w.x, w.y) for w in witnesses)), path)
