"""Training-free keyframe selection via truncated SVD and rectangular MaxVol."""

from .errors import (
    FormatError,
    InvalidChunking,
    InvalidCount,
    InvalidInput,
    InvalidPivot,
    InvalidRank,
    KeyvolError,
    RankDeficient,
)
from .linalg import SvdReduction, log_rect_vol, numerical_rank, rect_vol, truncated_svd
from .maxvol import (
    MaxvolParams,
    SelectionState,
    append_row,
    maxvol_square,
    rect_maxvol,
)
from .pipeline import (
    SelectionConfig,
    SelectionReport,
    select,
    select_chunked,
    select_fast,
    select_slow,
    uniform_downsample,
)
from .baselines import (
    MetricsBlock,
    clip_score,
    clip_threshold_select,
    compare_strategies,
    neighbor_cosine,
    uniform_sample,
)

__version__ = "0.1.0"

__all__ = [
    "KeyvolError", "InvalidInput", "InvalidRank", "RankDeficient",
    "InvalidPivot", "InvalidCount", "InvalidChunking", "FormatError",
    "SvdReduction", "truncated_svd", "rect_vol", "log_rect_vol",
    "numerical_rank",
    "MaxvolParams", "SelectionState", "maxvol_square", "rect_maxvol",
    "append_row",
    "SelectionConfig", "SelectionReport", "select", "select_fast",
    "select_slow", "select_chunked", "uniform_downsample",
    "MetricsBlock", "uniform_sample", "clip_threshold_select",
    "neighbor_cosine", "clip_score", "compare_strategies",
]
