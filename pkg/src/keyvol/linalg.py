"""Dense real-matrix primitives: truncated SVD, rectangular volumes, rank.

All computation runs at float64 regardless of the on-disk precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidRank

#: relative singular-value cutoff used for numerical rank decisions
RANK_RTOL = 1e-10


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Validate and return a 2-D float64 array.

    Raises InvalidInput on empty, non-2-D, or non-finite input.
    """
    a = np.asarray(data, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInput(f"{name} must be a non-empty 2-D matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        bad = np.argwhere(~np.isfinite(a))[0]
        raise InvalidInput(f"{name} contains non-finite value at row {bad[0]}, col {bad[1]}")
    return a


@dataclass(frozen=True)
class SvdReduction:
    """Rank-s reduction of an embedding matrix.

    basis: n x s matrix with orthonormal columns (top-s left singular vectors)
    singular_values: full spectrum, non-increasing
    right_vectors: s x d top right singular vectors (rows)
    """

    basis: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    s: int


def truncated_svd(q, s: int) -> SvdReduction:
    """Top-s SVD of an n x d matrix with a fixed sign convention.

    The sign of each singular pair is chosen so that the first nonzero
    entry of the right singular vector is non-negative, which makes the
    output reproducible across runs and LAPACK builds.
    """
    q = as_matrix(q, "embedding matrix")
    n, d = q.shape
    if not (1 <= s <= min(n, d)):
        raise InvalidRank(f"rank {s} out of range [1, {min(n, d)}]")
    u, sigma, vt = np.linalg.svd(q, full_matrices=False)
    for i in range(vt.shape[0]):
        row = vt[i]
        nz = np.flatnonzero(row)
        if nz.size and row[nz[0]] < 0:
            vt[i] = -row
            u[:, i] = -u[:, i]
    return SvdReduction(
        basis=u[:, :s].copy(),
        singular_values=sigma.copy(),
        right_vectors=vt[:s].copy(),
        s=s,
    )


def effective_basis(q, rank: int, rtol: float = RANK_RTOL) -> np.ndarray:
    """Left singular basis truncated to min(rank, numerical rank).

    Single SVD pass; returns an n x 1 zero matrix for a zero input so
    downstream selection can degrade gracefully.
    """
    q = as_matrix(q, "embedding matrix")
    u, sigma, vt = np.linalg.svd(q, full_matrices=False)
    if sigma[0] == 0.0:
        return np.zeros((q.shape[0], 1))
    r = int(np.count_nonzero(sigma / sigma[0] > rtol))
    s = min(rank, r)
    for i in range(s):
        nz = np.flatnonzero(vt[i])
        if nz.size and vt[i, nz[0]] < 0:
            u[:, i] = -u[:, i]
    return u[:, :s].copy()


def numerical_rank(q, rtol: float = RANK_RTOL) -> int:
    """Number of singular values above rtol * largest. Zero matrix has rank 0."""
    q = as_matrix(q)
    sigma = np.linalg.svd(q, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma / sigma[0] > rtol))


def log_rect_vol(a) -> float:
    """log of the rectangular volume; -inf for rank-deficient input.

    The Gram matrix is formed over the smaller dimension so the volume is
    well-defined for both wide and tall matrices.
    """
    a = as_matrix(a)
    p, q = a.shape
    gram = a @ a.T if p <= q else a.T @ a
    sign, logdet = np.linalg.slogdet(gram)
    if sign <= 0:
        return float("-inf")
    return 0.5 * logdet


def rect_vol(a) -> float:
    """sqrt(det(Gram)) over the smaller dimension; 0 for rank-deficient input."""
    lv = log_rect_vol(a)
    return 0.0 if lv == float("-inf") else float(np.exp(lv))
