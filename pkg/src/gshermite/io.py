"""CSV/JSON serialization with fixed float formatting.

Floats are written as ``%.16e`` (17 significant digits), which round-trips
every double exactly. Rows are emitted in C (row-major) index order.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .coeff import HermiteRep
from .errors import DataError, ShapeError

__all__ = ["fmt", "write_json", "sidecar_path", "write_coeffs", "read_coeffs"]


def fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, complex):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    return obj


def write_json(obj: Any, path) -> None:
    text = json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def sidecar_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".json")


def write_coeffs(rep: HermiteRep, path, extra: dict | None = None) -> None:
    """Write ``n1,...,nd,re,im`` rows plus a ``<path>.json`` sidecar."""
    d = rep.dims
    header = [f"n{k + 1}" for k in range(d)] + ["re", "im"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for idx in np.ndindex(*rep.shape):
            z = rep.coeffs[idx]
            w.writerow([*idx, fmt(z.real), fmt(z.imag)])
    meta = {"shape": list(rep.shape), "provenance": rep.provenance,
            "truncation_loss": rep.truncation_loss}
    if extra:
        meta.update(extra)
    write_json(meta, sidecar_path(path))


def read_coeffs(path) -> HermiteRep:
    """Inverse of :func:`write_coeffs`; the sidecar is optional."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[-2:] != ["re", "im"] or len(header) < 3:
            raise ShapeError(f"{path}: expected header n1,...,nd,re,im")
        d = len(header) - 2
        rows = [r for r in reader if r]
    try:
        idx = np.array([[int(v) for v in r[:d]] for r in rows], dtype=int).reshape(-1, d)
        vals = np.array([complex(float(r[d]), float(r[d + 1])) for r in rows])
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: malformed row ({exc})") from exc
    if np.isnan(vals.real).any() or np.isnan(vals.imag).any():
        bad = idx[int(np.argmax(np.isnan(vals.real) | np.isnan(vals.imag)))]
        raise DataError(f"{path}: NaN coefficient at index {tuple(bad.tolist())}")
    provenance, loss, shape = "analyzed", 0.0, None
    side = sidecar_path(path)
    if side.exists():
        meta = json.loads(side.read_text(encoding="utf-8"))
        provenance = meta.get("provenance", provenance)
        loss = float(meta.get("truncation_loss", 0.0))
        shape = tuple(meta["shape"]) if "shape" in meta else None
    if (idx < 0).any():
        raise ShapeError(f"{path}: negative index")
    if shape is None:
        shape = tuple((idx.max(axis=0) + 1).tolist()) if len(idx) else (1,) * d
    arr = np.zeros(shape, dtype=complex)
    if len(idx):
        if (idx >= np.array(shape)).any():
            raise ShapeError(f"{path}: index outside declared shape {shape}")
        arr[tuple(idx.T)] = vals
    return HermiteRep(arr, provenance, loss)
