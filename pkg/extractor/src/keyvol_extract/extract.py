"""Turn a video file into an MXIF embedding matrix plus a frame manifest."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .encoders import DEFAULT_ENCODER, get_encoder
from .errors import DecodeError, Unsupported
from .mxif import atomic_write_text, write_mxif


@dataclass(frozen=True)
class ExtractorConfig:
    """Exactly one of fps / frames selects the sampling mode."""

    video: str
    fps: float | None = None
    frames: int | None = None
    encoder: str = DEFAULT_ENCODER
    device: str | None = None
    out_prefix: str = "out"

    def __post_init__(self):
        if (self.fps is None) == (self.frames is None):
            raise ValueError("set exactly one of fps or frames")
        if self.fps is not None and self.fps <= 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        if self.frames is not None and self.frames < 1:
            raise ValueError(f"frames must be >= 1, got {self.frames}")


def _open_video(path: str) -> tuple[cv2.VideoCapture, int, float]:
    cap = cv2.VideoCapture(path)
    if not cap.isOpened():
        raise DecodeError(f"cannot open video {path!r}")
    total = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
    src_fps = float(cap.get(cv2.CAP_PROP_FPS)) or 30.0
    if total < 1:
        cap.release()
        raise DecodeError(f"video {path!r} reports no frames")
    return cap, total, src_fps


def _plan_samples(cfg: ExtractorConfig, total: int,
                  src_fps: float) -> tuple[list[int], list[float]]:
    """Frame numbers to grab and their timestamps, strictly increasing."""
    if cfg.frames is not None:
        n = min(cfg.frames, total)
        if n == 1:
            numbers = [0]
        else:
            numbers = [(j * (total - 1)) // (n - 1) for j in range(n)]
        times = [f / src_fps for f in numbers]
        return numbers, times
    duration = total / src_fps
    n = max(int(math.floor(duration * cfg.fps)), 1)
    times = [k / cfg.fps for k in range(n)]
    numbers = [min(int(round(t * src_fps)), total - 1) for t in times]
    return numbers, times


def _grab_frames(cap: cv2.VideoCapture, numbers: list[int]) -> list[np.ndarray]:
    wanted = sorted(set(numbers))
    grabbed: dict[int, np.ndarray] = {}
    pos = 0
    for target in wanted:
        while pos <= target:
            ok, frame = cap.read()
            if not ok:
                raise DecodeError(f"decode failed at frame {pos}")
            if pos == target:
                grabbed[target] = cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
            pos += 1
    return [grabbed[f] for f in numbers]


def extract(cfg: ExtractorConfig) -> tuple[str, str]:
    """Sample, embed, and write <prefix>.mxif + <prefix>.manifest.

    Returns the two written paths.
    """
    cap, total, src_fps = _open_video(cfg.video)
    try:
        numbers, times = _plan_samples(cfg, total, src_fps)
        frames = _grab_frames(cap, numbers)
    finally:
        cap.release()

    encoder = get_encoder(cfg.encoder, cfg.device)
    embeddings = encoder.encode_images(frames)

    mxif_path = f"{cfg.out_prefix}.mxif"
    manifest_path = f"{cfg.out_prefix}.manifest"
    write_mxif(embeddings, mxif_path)

    manifest = {
        "video": {
            "path": str(Path(cfg.video)),
            "fps_sampled": cfg.fps if cfg.fps is not None else None,
            "requested_frames": cfg.frames,
            "source_fps": src_fps,
            "total_frames": total,
            "encoder": encoder.name,
            "embedding_dim": int(embeddings.shape[1]),
        },
        "frames": [
            {
                "row_index": i,
                "source_frame_number": int(numbers[i]),
                "timestamp_seconds": float(times[i]),
            }
            for i in range(len(numbers))
        ],
    }
    atomic_write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", manifest_path)
    return mxif_path, manifest_path


def embed_query(text: str, cfg: ExtractorConfig, out_path: str) -> str:
    """Embed a text query as a single-row MXIF with the image-tower dim."""
    encoder = get_encoder(cfg.encoder, cfg.device)
    if not hasattr(encoder, "encode_text"):
        raise Unsupported(f"encoder {cfg.encoder!r} has no text tower")
    vec = encoder.encode_text(text)
    write_mxif(vec[None, :], out_path)
    return out_path
