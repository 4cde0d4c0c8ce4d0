"""Deterministic JSON rendering with reals at 9 significant digits."""

from __future__ import annotations

import json


def sig9(x: float) -> float:
    """Round a float to 9 significant digits (value used in JSON output)."""
    return float(f"{x:.9g}")


def sig9_str(x: float) -> str:
    """9-significant-digit decimal text for a float."""
    return f"{x:.9g}"


def round_reals(obj):
    """Recursively round every float in a JSON-like structure to 9 sig digits."""
    if isinstance(obj, float):
        return sig9(obj)
    if isinstance(obj, dict):
        return {k: round_reals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_reals(v) for v in obj]
    return obj


def dumps(obj, indent: int | None = None) -> str:
    """Serialize with stable key order and 9-significant-digit reals."""
    return json.dumps(
        round_reals(obj),
        indent=indent,
        sort_keys=False,
        ensure_ascii=False,
        separators=(",", ":") if indent is None else (",", ": "),
    )
