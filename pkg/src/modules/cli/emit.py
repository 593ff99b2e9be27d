"""Deterministic CSV/JSON artifacts.

- CSV files start with one ``# columns: ...`` comment line; floats use
  ``repr`` (shortest round-trip form) so equal inputs give equal bytes.
- JSON is written with sorted keys; complex numbers become [re, im],
  arrays nested lists, dataclasses and enums plain values.
- Every file goes through ``atomic_write_text``.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import fields, is_dataclass
from enum import Enum
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from modules.utils.atomic_io import atomic_write_text
from modules.utils.complex_json import encode_scalar
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)


def matrix_columns(prefix: str, shape: tuple[int, int]) -> list[str]:
    """``{prefix}_re_j_k`` / ``{prefix}_im_j_k`` for every entry, row-major, 1-based."""
    cols = []
    for j in range(shape[0]):
        for k in range(shape[1]):
            cols += [f"{prefix}_re_{j + 1}_{k + 1}", f"{prefix}_im_{j + 1}_{k + 1}"]
    return cols


def matrix_cells(a: np.ndarray) -> list[float]:
    out = []
    for v in np.asarray(a, dtype=complex).ravel():
        out += [float(v.real), float(v.imag)]
    return out


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    if isinstance(v, Enum):
        return str(v.value)
    return str(v)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    buf.write("# columns: " + ", ".join(columns) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row of length {len(row)} for {len(columns)} columns in {path.name}")
        writer.writerow([_cell(v) for v in row])
    atomic_write_text(path, buf.getvalue())
    logger.info("✅ wrote %s", path)
    return path


def jsonable(obj: Any) -> Any:
    """Convert results into plain JSON values."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else repr(f)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_scalar(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k.value if isinstance(k, Enum) else k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "model_dump"):
        return jsonable(obj.model_dump(mode="json"))
    return str(obj)


def write_json(path: Path, payload: Any) -> Path:
    text = json.dumps(jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    atomic_write_text(path, text)
    logger.info("✅ wrote %s", path)
    return path
