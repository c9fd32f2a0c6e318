"""Deterministic text output: fixed key order, fixed float format, big ints as strings."""
from __future__ import annotations

import json
import math
from fractions import Fraction


def fmt_float(x) -> str:
    """15 significant digits in exponent notation; "" for missing values."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.14e}"


def jsonable(obj):
    """Recursively convert to JSON-safe values: ints beyond 2^53 and Fractions become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2**53 else str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "__float__"):
        return fmt_float(obj)
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"
