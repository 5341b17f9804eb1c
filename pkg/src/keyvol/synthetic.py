"""Seeded synthetic embedding streams for tests, benchmarks, and demos."""

from __future__ import annotations

import numpy as np


def random_stream(n: int, d: int, seed: int) -> np.ndarray:
    """Full-rank Gaussian noise, one row per frame."""
    return np.random.default_rng(seed).standard_normal((n, d))


def constant_stream(n: int, d: int, seed: int, noise: float = 0.0) -> np.ndarray:
    """Near-static video: one direction repeated, optional tiny jitter."""
    rng = np.random.default_rng(seed)
    base = rng.standard_normal(d)
    base /= np.linalg.norm(base)
    q = np.tile(base, (n, 1))
    if noise > 0:
        q = q + noise * rng.standard_normal((n, d))
    return q


def clustered_stream(durations: list[int], d: int, seed: int,
                     noise: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Contiguous scenes with orthonormal mean directions.

    durations[i] frames belong to scene i, in time order.  Returns the
    embedding matrix and the per-row scene label.
    """
    m = len(durations)
    if d < m:
        raise ValueError(f"need d >= number of scenes, got d={d} < {m}")
    rng = np.random.default_rng(seed)
    # orthonormal scene means via QR of a random matrix
    means, _ = np.linalg.qr(rng.standard_normal((d, m)))
    rows, labels = [], []
    for scene, dur in enumerate(durations):
        for _ in range(dur):
            rows.append(means[:, scene] + noise * rng.standard_normal(d))
            labels.append(scene)
    return np.asarray(rows), np.asarray(labels)


def two_scene_stream(n: int, d: int, seed: int,
                     noise: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Two equal scenes with orthogonal means."""
    return clustered_stream([n // 2, n - n // 2], d, seed, noise)


def relevance_stream(n: int, d: int, n_relevant: int, seed: int,
                     hi: float = 0.8, lo: float = 0.2, bg_dim: int = 4
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frames with controlled cosine to a query direction.

    n_relevant frames (at random positions) have cosine hi to the query,
    the rest cosine lo.  The off-query component lives in a bg_dim
    subspace, mimicking the low-dimensional redundancy of real video
    content.  Returns (embeddings, query, relevant_positions).
    """
    rng = np.random.default_rng(seed)
    query = rng.standard_normal(d)
    query /= np.linalg.norm(query)
    background = rng.standard_normal((d, bg_dim))
    background -= np.outer(query, query @ background)
    background, _ = np.linalg.qr(background)
    positions = rng.choice(n, size=n_relevant, replace=False)
    relevant = np.zeros(n, dtype=bool)
    relevant[positions] = True
    rows = []
    for i in range(n):
        c = hi if relevant[i] else lo
        perp = background @ rng.standard_normal(bg_dim)
        perp /= np.linalg.norm(perp)
        rows.append(c * query + np.sqrt(1.0 - c * c) * perp)
    return np.asarray(rows), query, np.sort(positions)
