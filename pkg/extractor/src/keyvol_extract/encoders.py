"""Frame encoders: a CLIP-family model (via sentence-transformers) and a
deterministic pixel-statistics encoder that needs no model download.

Encoders take RGB uint8 arrays (H x W x 3) and return one float vector
per frame.
"""

from __future__ import annotations

import numpy as np

from .errors import EncoderError, Unsupported

DEFAULT_ENCODER = "clip-ViT-B-32"


class PixelEncoder:
    """Downsampled intensities plus per-channel histograms.

    Fully deterministic and CPU-only; useful for tests and for pipelines
    that only need coarse visual-change signals.
    """

    name = "pixel"
    grid = 8
    hist_bins = 16

    @property
    def dim(self) -> int:
        return 3 * self.grid * self.grid + 3 * self.hist_bins

    def encode_images(self, frames: list[np.ndarray]) -> np.ndarray:
        import cv2

        out = np.empty((len(frames), self.dim), dtype=np.float64)
        for i, frame in enumerate(frames):
            small = cv2.resize(frame, (self.grid, self.grid),
                               interpolation=cv2.INTER_AREA)
            parts = [small.astype(np.float64).ravel() / 255.0]
            for ch in range(3):
                hist, _ = np.histogram(frame[:, :, ch], bins=self.hist_bins,
                                       range=(0, 256))
                parts.append(hist / frame[:, :, ch].size)
            out[i] = np.concatenate(parts)
        return out

    def encode_text(self, text: str) -> np.ndarray:
        raise Unsupported("pixel encoder has no text tower")


class ClipEncoder:
    """CLIP-family vision/text encoder loaded through sentence-transformers."""

    def __init__(self, model_id: str = DEFAULT_ENCODER, device: str | None = None):
        try:
            from sentence_transformers import SentenceTransformer

            self.model = SentenceTransformer(model_id, device=device)
        except Exception as exc:
            raise EncoderError(f"could not load encoder {model_id!r}: {exc}") from exc
        self.name = model_id

    @property
    def dim(self) -> int:
        return int(self.model.get_sentence_embedding_dimension())

    def encode_images(self, frames: list[np.ndarray]) -> np.ndarray:
        from PIL import Image

        images = [Image.fromarray(f) for f in frames]
        emb = self.model.encode(images, convert_to_numpy=True,
                                show_progress_bar=False, batch_size=16)
        return np.asarray(emb, dtype=np.float64)

    def encode_text(self, text: str) -> np.ndarray:
        if not text:
            raise Unsupported("empty query text")
        emb = self.model.encode([text], convert_to_numpy=True,
                                show_progress_bar=False)
        return np.asarray(emb[0], dtype=np.float64)


def get_encoder(encoder_id: str = DEFAULT_ENCODER, device: str | None = None):
    if encoder_id == "pixel":
        return PixelEncoder()
    return ClipEncoder(encoder_id, device)
