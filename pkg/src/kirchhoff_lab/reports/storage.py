# =============================================================================
# KIRCHHOFF LAB REPORT STORAGE
# Deterministic JSON encoding and grid-function CSV files
# =============================================================================
"""
Storage for reports and grid functions.

JSON documents are encoded deterministically: keys keep model field order,
every float is written with 17 significant digits, and non-finite floats
become null. Identical inputs therefore give byte-identical reports.

Grid functions are written as two-column CSV (header ``x,value``) with
``%.17g`` values, ready for plotting tools.
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from kirchhoff_lab.grid import GridFunction

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"
CSV_HEADER = "x,value"


# =============================================================================
# JSON
# =============================================================================

def _plain(obj: Any) -> Any:
    """Convert models, enums and numpy scalars to JSON-ready python values."""
    if isinstance(obj, BaseModel):
        return _plain(obj.model_dump(mode="python"))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _encode(value: Any, indent: Optional[int], level: int) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT) if math.isfinite(value) else "null"

    if isinstance(value, dict):
        items = [f"{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
                 for k, v in value.items()]
        return _wrap("{", "}", items, indent, level)
    items = [_encode(v, indent, level + 1) for v in value]
    return _wrap("[", "]", items, indent, level)


def _wrap(open_: str, close: str, items: list, indent: Optional[int], level: int) -> str:
    if not items:
        return open_ + close
    if indent is None:
        return open_ + ", ".join(items) + close
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    return open_ + "\n" + ",\n".join(pad + item for item in items) + "\n" + end + close


def dumps_report(payload: Any, indent: Optional[int] = 2) -> str:
    """
    Encode a report deterministically.

    Args:
        payload: pydantic model, dict or list
        indent: spaces per level, or None for a single line

    Returns:
        JSON text
    """
    return _encode(_plain(payload), indent, 0)


def write_report(payload: Any, path: str) -> Path:
    """Write a report to ``path`` (parent directories are created)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps_report(payload) + "\n", encoding="utf-8")
    logger.info(f"📄 Report saved to: {target}")
    return target


# =============================================================================
# CSV
# =============================================================================

def write_grid_csv(u: GridFunction, path: str) -> Path:
    """Write nodes and values as ``x,value`` rows."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([u.x, u.values])
    np.savetxt(target, table, delimiter=",", header=CSV_HEADER, comments="", fmt="%.17g")
    logger.info(f"📄 Grid function saved to: {target}")
    return target


__all__ = [
    "dumps_report",
    "write_report",
    "write_grid_csv",
]
