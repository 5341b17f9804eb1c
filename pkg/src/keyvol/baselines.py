"""Baseline selectors and diversity/relevance metrics.

Baselines: evenly spaced sampling and a similarity-threshold scan that
keeps a frame only when it differs enough from the last kept one.
Metrics: cosine similarity between consecutive selected frames and mean
cosine similarity of the selection to a query embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidCount, InvalidInput
from .linalg import as_matrix
from .pipeline import SelectionConfig, select, select_fast


def uniform_sample(n: int, k: int) -> list[int]:
    """k evenly spaced indices over [0, n), endpoints included."""
    if not 1 <= k <= n:
        raise InvalidCount(f"k must be in [1, {n}], got {k}")
    if k == 1:
        return [0]
    return [(j * (n - 1)) // (k - 1) for j in range(k)]


def _unit_rows(q: np.ndarray, name: str) -> np.ndarray:
    norms = np.linalg.norm(q, axis=1)
    if (norms == 0).any():
        row = int(np.flatnonzero(norms == 0)[0])
        raise InvalidInput(f"{name} has zero row at index {row}")
    return q / norms[:, None]


def clip_threshold_select(q, theta: float) -> list[int]:
    """Keep frame 0, then every frame whose cosine to the last kept one
    is below theta."""
    q = as_matrix(q, "embeddings")
    e = _unit_rows(q, "embeddings")
    kept = [0]
    for i in range(1, e.shape[0]):
        if float(e[i] @ e[kept[-1]]) < theta:
            kept.append(i)
    return kept


def neighbor_cosine(q, indices) -> list[float]:
    """Cosines between consecutive selected embeddings; empty if < 2 indices."""
    indices = list(indices)
    if len(indices) < 2:
        return []
    q = as_matrix(q, "embeddings")
    e = _unit_rows(q[indices], "selected embeddings")
    return [float(e[j] @ e[j + 1]) for j in range(len(indices) - 1)]


def clip_score(q, indices, query) -> float:
    """Mean cosine similarity of the selected embeddings to a query vector."""
    q = as_matrix(q, "embeddings")
    query = np.asarray(query, dtype=np.float64).ravel()
    if not np.isfinite(query).all():
        raise InvalidInput("query contains non-finite values")
    qn = np.linalg.norm(query)
    if qn == 0:
        raise InvalidInput("query embedding is zero")
    e = _unit_rows(q[list(indices)], "selected embeddings")
    return float(np.mean(e @ (query / qn)))


@dataclass
class MetricsBlock:
    """Per-strategy diversity/relevance summary."""

    selected_count: int
    neighbor_cosine: list[float] = field(default_factory=list)
    mean_neighbor_cosine: float | None = None
    clip_score: float | None = None
    indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "selected_count": self.selected_count,
            "neighbor_cosine": self.neighbor_cosine,
            "mean_neighbor_cosine": self.mean_neighbor_cosine,
            "indices": self.indices,
        }
        if self.clip_score is not None:
            d["clip_score"] = self.clip_score
        return d


def metrics_for(q, indices, query=None) -> MetricsBlock:
    indices = [int(i) for i in indices]
    cosines = neighbor_cosine(q, indices)
    return MetricsBlock(
        selected_count=len(indices),
        neighbor_cosine=cosines,
        mean_neighbor_cosine=float(np.mean(cosines)) if cosines else None,
        clip_score=clip_score(q, indices, query) if query is not None else None,
        indices=indices,
    )


def compare_strategies(q, cfg: SelectionConfig, query=None,
                       theta: float = 0.5) -> dict:
    """Run volume selection, the two baselines, and both compositions.

    The uniform baseline gets the same output budget as the volume
    selection so diversity numbers are comparable.
    """
    q = as_matrix(q, "embeddings")
    n = q.shape[0]

    volume_report = select(q, cfg)
    volume_idx = volume_report.selected_indices
    k = len(volume_idx)

    uniform_idx = uniform_sample(n, k)
    threshold_idx = clip_threshold_select(q, theta)

    # threshold first, then volume selection on the survivors
    survivors = threshold_idx
    sub_cfg = SelectionConfig(
        rank=cfg.rank, tol=cfg.tol, min_out=min(cfg.min_out, len(survivors)),
        max_out=min(cfg.max_out, len(survivors)), mode="fast",
        tol_convention=cfg.tol_convention,
    )
    local = select_fast(q[survivors], sub_cfg).selected_indices
    threshold_then_volume = sorted(survivors[i] for i in local)

    # volume selection first, then threshold scan over the kept frames
    local = clip_threshold_select(q[volume_idx], theta)
    volume_then_threshold = sorted(volume_idx[i] for i in local)

    strategies = {
        "uniform": uniform_idx,
        "threshold": threshold_idx,
        "volume": volume_idx,
        "threshold_then_volume": threshold_then_volume,
        "volume_then_threshold": volume_then_threshold,
    }
    return {
        "config": volume_report.config,
        "theta": theta,
        "strategies": {
            name: metrics_for(q, idx, query).to_dict()
            for name, idx in strategies.items()
        },
    }
