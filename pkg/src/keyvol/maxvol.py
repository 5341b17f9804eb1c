"""Square and rectangular MaxVol row selection.

The square phase finds a dominant s x s submatrix by pivot swapping; the
rectangular phase grows it greedily, appending the unselected row with the
largest coefficient norm until the norms drop below a tolerance or the row
budget is reached.  Coefficients are maintained by rank-1 updates rather
than re-solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import get_lapack_funcs

from .errors import InvalidInput, InvalidPivot, RankDeficient
from .linalg import as_matrix, numerical_rank, truncated_svd

#: dominance slack for the square phase: swaps stop once every
#: coefficient magnitude is <= 1 + SQUARE_DELTA
SQUARE_DELTA = 1e-9


@dataclass(frozen=True)
class MaxvolParams:
    """Stopping parameters for rectangular growth.

    tau is the effective threshold compared against coefficient row norms
    (callers apply any tolerance convention before constructing this).
    """

    tau: float
    min_rows: int = 1
    max_rows: int | None = None
    max_sweeps: int = 100

    def __post_init__(self):
        if self.tau < 0:
            raise InvalidInput(f"tau must be non-negative, got {self.tau}")
        if self.min_rows < 1:
            raise InvalidInput(f"min_rows must be >= 1, got {self.min_rows}")
        if self.max_rows is not None and self.max_rows < self.min_rows:
            raise InvalidInput(
                f"max_rows {self.max_rows} < min_rows {self.min_rows}"
            )


@dataclass(frozen=True)
class StepRecord:
    """One greedy append: which row, its coefficient norm, volume after."""

    index: int
    coeff_norm: float
    log_volume: float


@dataclass
class SelectionState:
    """Growing pivot set with its coefficient matrix and running volume.

    pivots keeps insertion order; `selected()` returns them sorted.  The
    internal coefficient matrix covers all rows; `coeff` exposes only the
    unselected rows, which satisfy coeff @ a[pivots] = a[unselected].
    """

    pivots: list[int]
    _c: np.ndarray
    log_volume: float
    step_log: list[StepRecord] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return self._c.shape[0]

    @property
    def unselected(self) -> np.ndarray:
        mask = np.ones(self.n_rows, dtype=bool)
        mask[self.pivots] = False
        return np.flatnonzero(mask)

    @property
    def coeff(self) -> np.ndarray:
        return self._c[self.unselected]

    def selected(self) -> np.ndarray:
        return np.sort(np.asarray(self.pivots, dtype=np.int64))

    def coeff_norms(self) -> np.ndarray:
        """L2 norm of every row's coefficients; selected rows get -1."""
        norms = np.linalg.norm(self._c, axis=1)
        norms[self.pivots] = -1.0
        return norms

    def append(self, i: int) -> "SelectionState":
        """Add row i to the pivots, updating coefficients by a rank-1 step."""
        i = int(i)
        if i in self.pivots:
            raise InvalidPivot(f"row {i} is already selected")
        if not 0 <= i < self.n_rows:
            raise InvalidPivot(f"row {i} out of range [0, {self.n_rows})")
        c = self._c[i].copy()
        norm_sq = float(c @ c)
        v = self._c @ c
        scale = 1.0 / (1.0 + norm_sq)
        self._c -= scale * np.outer(v, c)
        self._c = np.hstack([self._c, (scale * v)[:, None]])
        self.pivots.append(i)
        self.log_volume += 0.5 * np.log1p(norm_sq)
        self.step_log.append(StepRecord(i, float(np.sqrt(norm_sq)), self.log_volume))
        return self


def append_row(state: SelectionState, i: int) -> SelectionState:
    return state.append(i)


def maxvol_square(q_s, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Dominant s x s submatrix of an n x s matrix by pivot swapping.

    Returns (pivots, coeff) with coeff of shape n x s, identity on the
    pivot rows and |coeff| <= 1 + SQUARE_DELTA everywhere at termination.
    Ties in the swap search resolve to the lowest flat index.
    """
    a = as_matrix(q_s, "basis")
    n, s = a.shape
    if n < s:
        raise InvalidInput(f"need at least {s} rows, got {n}")
    if numerical_rank(a) < s:
        raise RankDeficient(f"matrix rank below requested {s} columns")

    # LU partial pivoting gives a well-conditioned starting submatrix
    getrf = get_lapack_funcs("getrf", (a,))
    _, ipiv, _ = getrf(a, overwrite_a=False)
    order = np.arange(n)
    for k in range(s):
        order[k], order[ipiv[k]] = order[ipiv[k]], order[k]

    pivots = order[:s].copy()
    c = np.linalg.solve(a[pivots].T, a.T).T  # n x s, identity on pivot rows

    for _ in range(max_sweeps):
        flat = np.argmax(np.abs(c))
        i, j = divmod(int(flat), s)
        if abs(c[i, j]) <= 1.0 + SQUARE_DELTA:
            break
        # swap row pivots[j] out for row i (Sherman-Morrison on the
        # pivot submatrix; leaves the new pivot rows exactly identity)
        row = c[i].copy()
        row[j] -= 1.0
        col = c[:, j].copy()
        c -= np.outer(col, row) / c[i, j]
        pivots[j] = i

    return pivots, c


def _working_matrix(a: np.ndarray, max_cols: int) -> np.ndarray:
    """Rank-reduce to at most max_cols columns, preserving row geometry.

    Right-multiplying by the top right singular vectors keeps the min-norm
    coefficient system identical while making the square phase feasible on
    rank-deficient or over-wide input.
    """
    r = min(numerical_rank(a), max_cols)
    if r == 0:
        return np.zeros((a.shape[0], 1))
    if r == a.shape[1]:
        return a
    red = truncated_svd(a, r)
    return red.basis * red.singular_values[:r]


def rect_maxvol(q_s, params: MaxvolParams) -> SelectionState:
    """Greedy rectangular MaxVol selection on an n x s basis.

    Starts from the square-phase pivots (fewer if the matrix is
    rank-deficient), then appends the row with maximal coefficient norm
    until every remaining norm is <= params.tau, topping up to
    params.min_rows and never exceeding params.max_rows.
    """
    a = as_matrix(q_s, "basis")
    n = a.shape[0]
    max_rows = n if params.max_rows is None else min(params.max_rows, n)
    min_rows = min(params.min_rows, n)

    work = _working_matrix(a, max_rows)
    if not work.any():
        # zero matrix: any subset has zero volume, take the earliest rows
        state = SelectionState(
            pivots=list(range(min_rows)),
            _c=np.zeros((n, min_rows)),
            log_volume=float("-inf"),
        )
        return state

    pivots, c = maxvol_square(work, params.max_sweeps)
    _, logdet = np.linalg.slogdet(work[pivots])
    state = SelectionState(pivots=[int(p) for p in pivots], _c=c, log_volume=logdet)

    while len(state.pivots) < max_rows:
        norms = state.coeff_norms()
        i = int(np.argmax(norms))
        if norms[i] <= params.tau and len(state.pivots) >= min_rows:
            break
        state.append(i)

    return state
