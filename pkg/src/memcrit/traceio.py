"""Trace serialization: CSV and JSON, bit-exact round trips.

Floats are written with ``repr``, the shortest text that parses back to the
same double. CSV files start with one ``# key=value`` comment line carrying
the config hash, followed by the column header.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .solver import Trace

__all__ = ["write_trace", "read_trace", "trace_header", "write_table", "read_table",
           "format_float"]


def format_float(x: float) -> str:
    """Shortest round-trip text for ``x``; ``inf``, ``-inf`` and ``nan`` spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def trace_header(n_devices: int) -> list[str]:
    if n_devices == 1:
        return ["t", "v_applied", "v_device_a", "i", "x_a"]
    if n_devices == 2:
        return ["t", "v_applied", "v_device_a", "v_device_b", "i", "x_a", "x_b"]
    raise ValueError(f"traces have one or two devices, not {n_devices}")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_trace(trace: Trace, path, fmt: str | None = None, config_hash: str = "") -> Path:
    """Write ``trace`` as CSV or JSON (format from ``fmt`` or the file suffix).

    Raises
    ------
    OSError
        With the offending path in the message.
    """
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown trace format {fmt!r} (csv or json)")
    cols = trace.columns()
    header = trace_header(trace.n_devices)
    config_hash = config_hash or str(trace.metadata.get("config_hash", ""))
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "csv":
                fh.write(f"# config_hash={config_hash}\n")
                fh.write(",".join(header) + "\n")
                data = [cols[h] for h in header]
                for row in zip(*data):
                    fh.write(",".join(format_float(v) for v in row) + "\n")
            else:
                meta = dict(trace.metadata)
                meta["config_hash"] = config_hash
                doc = {"metadata": meta,
                       "columns": {h: [format_float(v) for v in cols[h]] for h in header}}
                json.dump(doc, fh, indent=1, default=_json_default)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc.strerror or exc}") from exc
    return path


def read_trace(path) -> Trace:
    """Read a trace written by :func:`write_trace`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read trace from {path}: {exc.strerror or exc}") from exc
    if path.suffix.lower() == ".json":
        doc = json.loads(text)
        meta = doc.get("metadata", {})
        cols = {k: np.array([float(v) for v in vals]) for k, vals in doc["columns"].items()}
    else:
        meta, cols = _parse_csv(text)
    nd = 2 if "x_b" in cols else 1
    names = "ab"[:nd]
    return Trace(
        t=cols["t"],
        v_applied=cols["v_applied"],
        v_device=np.column_stack([cols[f"v_device_{n}"] for n in names]),
        i=cols["i"],
        x=np.column_stack([cols[f"x_{n}"] for n in names]),
        metadata=meta,
    )


def _parse_csv(text: str):
    meta = {}
    lines = text.splitlines()
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        key, _, value = lines[k][1:].strip().partition("=")
        meta[key.strip()] = value.strip()
        k += 1
    if k >= len(lines):
        raise ValueError("CSV file has no header")
    header = lines[k].split(",")
    rows = [ln.split(",") for ln in lines[k + 1:] if ln]
    if any(len(r) != len(header) for r in rows):
        raise ValueError("ragged CSV rows")
    cols = {h: np.array([float(r[j]) for r in rows]) for j, h in enumerate(header)}
    return meta, cols


def write_table(path, header: list[str], rows, config_hash: str = "") -> Path:
    """Write a small CSV table (strings pass through, numbers use :func:`format_float`)."""
    path = Path(path)

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (float, np.floating, int, np.integer)) and not isinstance(v, bool):
            return format_float(v)
        return str(v)

    try:
        with open(path, "w", newline="") as fh:
            fh.write(f"# config_hash={config_hash}\n")
            fh.write(",".join(header) + "\n")
            for r in rows:
                fh.write(",".join(cell(v) for v in r) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc.strerror or exc}") from exc
    return path


def read_table(path) -> tuple[list[str], list[list[str]]]:
    """Header and raw string rows of a CSV written by :func:`write_table` (or any plain CSV)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty table")
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]
