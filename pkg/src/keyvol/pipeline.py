"""End-to-end selection pipelines: SVD reduction + rectangular MaxVol.

Three modes: fast (select directly from the given frames), slow (select
from an oversampled pool, then uniformly downsample to the budget), and
chunked (split the video into contiguous chunks and select per chunk).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidChunking, InvalidCount, InvalidInput
from .linalg import as_matrix, effective_basis
from .maxvol import MaxvolParams, SelectionState, rect_maxvol

MODES = ("fast", "slow", "chunked")
TOL_CONVENTIONS = ("sqrt1p", "literal")


@dataclass(frozen=True)
class SelectionConfig:
    """Knobs for the selection pipelines.

    rank: SVD truncation dimension.
    tol: user-facing tolerance; with the sqrt1p convention the stopping
        threshold on coefficient norms is sqrt(1 + tol^2), with literal it
        is tol itself.
    pool: expected oversample size in slow mode.
    chunks: number of contiguous chunks in chunked mode.
    """

    rank: int = 8
    tol: float = 0.3
    min_out: int = 1
    max_out: int = 64
    mode: str = "fast"
    pool: int = 128
    chunks: int = 32
    tol_convention: str = "sqrt1p"

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput(f"rank must be >= 1, got {self.rank}")
        if self.tol < 0:
            raise InvalidInput(f"tol must be >= 0, got {self.tol}")
        if not 1 <= self.min_out <= self.max_out:
            raise InvalidInput(
                f"need 1 <= min_out <= max_out, got ({self.min_out}, {self.max_out})"
            )
        if self.mode not in MODES:
            raise InvalidInput(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.tol_convention not in TOL_CONVENTIONS:
            raise InvalidInput(
                f"tol_convention must be one of {TOL_CONVENTIONS}, "
                f"got {self.tol_convention!r}"
            )
        if self.mode == "slow" and self.pool < self.max_out:
            raise InvalidInput(
                f"slow mode needs pool >= max_out, got {self.pool} < {self.max_out}"
            )
        if self.mode == "chunked" and not 1 <= self.chunks <= self.max_out:
            raise InvalidInput(
                f"chunked mode needs 1 <= chunks <= max_out, got {self.chunks}"
            )

    @property
    def tau(self) -> float:
        if self.tol_convention == "sqrt1p":
            return float(np.sqrt(1.0 + self.tol**2))
        return self.tol


@dataclass
class SelectionReport:
    """Selection result plus diagnostics, ready for serialization."""

    selected_indices: list[int]
    mode: str
    config: dict
    steps: list[dict] = field(default_factory=list)
    timing_ms: dict = field(default_factory=dict)
    pre_downsample_count: int | None = None
    chunk_bounds: list[list[int]] | None = None
    metrics: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}


def uniform_downsample(indices, k: int) -> list[int]:
    """Evenly spaced subsequence of an ascending index list, endpoints kept."""
    indices = list(indices)
    length = len(indices)
    if not 1 <= k <= length:
        raise InvalidCount(f"k must be in [1, {length}], got {k}")
    if k == 1:
        return [indices[0]]
    positions = [(j * (length - 1)) // (k - 1) for j in range(k)]
    return [indices[p] for p in positions]


def _reduce_and_select(q: np.ndarray, cfg: SelectionConfig, min_out: int,
                       max_out: int) -> tuple[SelectionState, dict]:
    """SVD to effective rank, then rectangular MaxVol; returns state + timing."""
    t0 = time.perf_counter()
    basis = effective_basis(q, cfg.rank)
    t1 = time.perf_counter()
    params = MaxvolParams(tau=cfg.tau, min_rows=min_out, max_rows=max_out)
    state = rect_maxvol(basis, params)
    t2 = time.perf_counter()
    timing = {"svd_ms": (t1 - t0) * 1e3, "maxvol_ms": (t2 - t1) * 1e3}
    return state, timing


def _steps(state: SelectionState) -> list[dict]:
    return [
        {"index": r.index, "coeff_norm": r.coeff_norm, "log_volume": r.log_volume}
        for r in state.step_log
    ]


def select_fast(q, cfg: SelectionConfig) -> SelectionReport:
    """Run selection directly on the given embedding matrix."""
    q = as_matrix(q, "embeddings")
    if cfg.max_out > q.shape[0]:
        raise InvalidInput(
            f"max_out {cfg.max_out} exceeds frame count {q.shape[0]}"
        )
    state, timing = _reduce_and_select(q, cfg, cfg.min_out, cfg.max_out)
    return SelectionReport(
        selected_indices=[int(i) for i in state.selected()],
        mode="fast",
        config=asdict(cfg),
        steps=_steps(state),
        timing_ms=timing,
    )


def select_slow(q, cfg: SelectionConfig) -> SelectionReport:
    """Select from an oversampled pool, then downsample to the budget.

    The growth phase is allowed to keep up to the whole pool; if it keeps
    more than max_out frames the sorted selection is uniformly thinned.
    """
    q = as_matrix(q, "embeddings")
    n = q.shape[0]
    state, timing = _reduce_and_select(q, cfg, cfg.min_out, n)
    selected = [int(i) for i in state.selected()]
    pre_count = len(selected)
    if pre_count > cfg.max_out:
        selected = uniform_downsample(selected, cfg.max_out)
    return SelectionReport(
        selected_indices=selected,
        mode="slow",
        config=asdict(cfg),
        steps=_steps(state),
        timing_ms=timing,
        pre_downsample_count=pre_count,
    )


def chunk_budgets(max_out: int, m: int) -> list[int]:
    """Per-chunk output budgets: near-equal split summing to max_out.

    Earlier chunks absorb the remainder, so for m dividing max_out every
    chunk gets max_out // m.
    """
    base, extra = divmod(max_out, m)
    return [base + (1 if i < extra else 0) for i in range(m)]


def select_chunked(q, cfg: SelectionConfig) -> SelectionReport:
    """Split rows into contiguous chunks and select independently in each."""
    q = as_matrix(q, "embeddings")
    n = q.shape[0]
    m = cfg.chunks
    if n < m:
        raise InvalidChunking(f"cannot split {n} rows into {m} chunks")

    sizes = [n // m + (1 if i < n % m else 0) for i in range(m)]
    budgets = chunk_budgets(cfg.max_out, m)
    bounds, start = [], 0
    for size in sizes:
        bounds.append([start, start + size])
        start += size

    selected: list[int] = []
    steps: list[dict] = []
    timing = {"svd_ms": 0.0, "maxvol_ms": 0.0}
    for (lo, hi), budget in zip(bounds, budgets):
        state, t = _reduce_and_select(q[lo:hi], cfg, 1, min(budget, hi - lo))
        selected.extend(int(i) + lo for i in state.selected())
        steps.extend(
            {"index": r.index + lo, "coeff_norm": r.coeff_norm,
             "log_volume": r.log_volume}
            for r in state.step_log
        )
        timing["svd_ms"] += t["svd_ms"]
        timing["maxvol_ms"] += t["maxvol_ms"]

    return SelectionReport(
        selected_indices=sorted(selected),
        mode="chunked",
        config=asdict(cfg),
        steps=steps,
        timing_ms=timing,
        chunk_bounds=bounds,
    )


def select(q, cfg: SelectionConfig) -> SelectionReport:
    """Dispatch on cfg.mode."""
    if cfg.mode == "fast":
        return select_fast(q, cfg)
    if cfg.mode == "slow":
        return select_slow(q, cfg)
    return select_chunked(q, cfg)
