"""File formats: MXIF binary embeddings, CSV embeddings, manifests, reports.

MXIF layout (little-endian, 16-byte header):
    bytes 0-3   magic "MXIF"
    bytes 4-5   version, u16 (currently 1)
    byte  6     dtype code, u8 (0 = float32)
    byte  7     reserved, u8 (0)
    bytes 8-11  rows, u32
    bytes 12-15 cols, u32
    payload     rows * cols float32 values, row-major

Readers reject malformed input instead of repairing it; errors name the
offending byte offset or line number.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidInput

MAGIC = b"MXIF"
VERSION = 1
DTYPE_FLOAT32 = 0
_HEADER = struct.Struct("<4sHBBII")


def write_embeddings(matrix, path) -> None:
    """Write a matrix as MXIF (float32 payload)."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidInput(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvalidInput("matrix contains non-finite values")
    rows, cols = a.shape
    header = _HEADER.pack(MAGIC, VERSION, DTYPE_FLOAT32, 0, rows, cols)
    payload = np.ascontiguousarray(a, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


def read_embeddings(path) -> np.ndarray:
    """Read an MXIF file into a float64 matrix."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(
            f"file too short for header: {len(raw)} bytes < {_HEADER.size}"
        )
    magic, version, dtype, _, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r} at offset 0, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version} at offset 4")
    if dtype != DTYPE_FLOAT32:
        raise FormatError(f"unsupported dtype code {dtype} at offset 6")
    if rows < 1 or cols < 1:
        raise FormatError(f"invalid shape {rows}x{cols} in header")
    expected = rows * cols * 4
    actual = len(raw) - _HEADER.size
    if actual != expected:
        raise FormatError(
            f"payload length mismatch: expected {expected} bytes, got {actual}"
        )
    a = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(rows, cols)
    a = a.astype(np.float64)
    if not np.isfinite(a).all():
        row = int(np.argwhere(~np.isfinite(a))[0][0])
        raise InvalidInput(f"non-finite value in payload at row {row}")
    return a


def read_csv_embeddings(path) -> np.ndarray:
    """Read a rectangular numeric CSV (no header) into a float64 matrix."""
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise FormatError(f"non-numeric value at line {lineno}") from exc
            if rows and len(values) != len(rows[0]):
                raise FormatError(
                    f"ragged row at line {lineno}: expected {len(rows[0])} "
                    f"columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise FormatError("empty CSV")
    a = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(a).all():
        row = int(np.argwhere(~np.isfinite(a))[0][0])
        raise InvalidInput(f"non-finite value at row {row}")
    return a


def load_embeddings(path, fmt: str | None = None) -> np.ndarray:
    """Load embeddings, inferring the format from the extension if not given."""
    if fmt is None:
        fmt = "csv" if str(path).endswith(".csv") else "binary"
    return read_csv_embeddings(path) if fmt == "csv" else read_embeddings(path)


def write_manifest(manifest: dict, path) -> None:
    _validate_manifest(manifest)
    _write_json(manifest, path)


def read_manifest(path) -> dict:
    try:
        manifest = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest is not valid JSON: {exc}") from exc
    _validate_manifest(manifest)
    return manifest


def _validate_manifest(manifest: dict) -> None:
    frames = manifest.get("frames")
    if not isinstance(frames, list) or not frames:
        raise FormatError("manifest must contain a non-empty 'frames' list")
    prev_ts = None
    for i, rec in enumerate(frames):
        if rec.get("row_index") != i:
            raise FormatError(f"frame record {i} has row_index {rec.get('row_index')}")
        ts = rec.get("timestamp_seconds")
        if not isinstance(ts, (int, float)):
            raise FormatError(f"frame record {i} missing timestamp_seconds")
        if prev_ts is not None and ts <= prev_ts:
            raise FormatError(f"timestamps not strictly increasing at record {i}")
        prev_ts = ts


def _write_json(obj: dict, path) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def write_report(report: dict, path, canonical: bool = False) -> None:
    """Serialize a report dict deterministically (sorted keys, LF, UTF-8).

    canonical=True strips timing fields so two runs on the same input
    compare byte-identical.
    """
    if canonical:
        report = canonicalize(report)
    _write_json(report, path)


def read_report(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"report is not valid JSON: {exc}") from exc


def canonicalize(report: dict) -> dict:
    """Recursively drop timing fields from a report dict."""
    return {
        k: canonicalize(v) if isinstance(v, dict) else v
        for k, v in report.items()
        if k not in ("timing_ms", "timing")
    }
