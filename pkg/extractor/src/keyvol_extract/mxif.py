"""Writer for the MXIF embedding container consumed by the keyvol CLI.

Layout (little-endian): magic "MXIF", version u16 = 1, dtype u8 = 0
(float32), reserved u8, rows u32, cols u32, then the row-major float32
payload.  Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sHBBII")


def write_mxif(matrix: np.ndarray, path) -> None:
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or not np.isfinite(a).all():
        raise ValueError("matrix must be 2-D and finite")
    rows, cols = a.shape
    blob = _HEADER.pack(b"MXIF", 1, 0, 0, rows, cols)
    blob += np.ascontiguousarray(a, dtype="<f4").tobytes()
    _atomic_write(blob, path)


def _atomic_write(blob: bytes, path) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def atomic_write_text(text: str, path) -> None:
    _atomic_write(text.encode("utf-8"), path)
