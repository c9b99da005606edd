"""Randomized row and column selection in sublinear time.

Both entry points look at the input only through row and column reads
(``a[rows, :]`` and ``a[:, cols]`` plus ``a.shape``), never the whole
matrix, so any object with 2-d integer indexing works. What they read:

* run_algorithm1: one uniform row sample, one uniform column sample,
  each factored once. The two passes draw from independent substreams
  of the seed, so the row result does not depend on the column pass.
* run_algorithm2: alternates between factoring the current rows to pick
  columns and factoring the picked columns to pick rows, optionally
  topping each set up with fresh uniform indices.

Selected index sets always list the factorization picks first, then the
fresh uniform picks, in draw order.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput
from .linalg_core import COLUMNS, ROWS, IndexSet
from .srrqr import srrqr_select

__all__ = [
    "Algorithm1Params",
    "Algorithm2Params",
    "SelectionStep",
    "SelectionTrace",
    "uniform_indices",
    "run_algorithm1",
    "run_algorithm2",
]


def uniform_indices(extent, count, exclude=None, rng=None):
    """Draw ``count`` distinct indices uniformly from range(extent) minus ``exclude``.

    Returned in draw order as int64. Raises InvalidInput when the
    complement is too small.
    """
    extent = int(extent)
    count = int(count)
    if extent <= 0:
        raise InvalidInput(f"extent must be positive, got {extent}")
    if count < 0:
        raise InvalidInput(f"count must be nonnegative, got {count}")
    if exclude is None:
        pool = np.arange(extent, dtype=np.int64)
    else:
        if isinstance(exclude, IndexSet):
            exclude = exclude.indices
        pool = np.setdiff1d(np.arange(extent, dtype=np.int64), np.asarray(exclude, dtype=np.int64))
    if count > pool.size:
        raise InvalidInput(
            f"cannot draw {count} distinct indices from a pool of {pool.size}"
        )
    if count == 0:
        return np.empty(0, dtype=np.int64)
    rng = np.random.default_rng(rng)
    return np.asarray(rng.choice(pool, size=count, replace=False), dtype=np.int64)


@dataclass(frozen=True)
class Algorithm1Params:
    """One-shot selection: ell_0 sampled, ell_a factored out, ell_b fresh."""

    ell_0: int
    ell_a: int
    ell_b: int
    eta: float = 1.1
    seed: int = 0

    def __post_init__(self):
        if not self.ell_0 >= self.ell_a >= 1:
            raise InvalidInput(
                f"need ell_0 >= ell_a >= 1, got ell_0={self.ell_0}, ell_a={self.ell_a}"
            )
        if self.ell_b < 0:
            raise InvalidInput(f"ell_b must be nonnegative, got {self.ell_b}")
        if not self.eta > 1.0:
            raise InvalidInput(f"eta must exceed 1, got {self.eta}")


@dataclass(frozen=True)
class Algorithm2Params:
    """Iterative selection; the four count tuples are indexed by iteration.

    ell_srrqr_col[h] columns are factored out of the current row set,
    ell_new_col[h] fresh uniform columns are appended, and symmetrically
    for rows. With accumulate_union the returned sets are the unions of
    every iteration's picks rather than the last iteration's.
    """

    ell_0: int
    ell_srrqr_col: tuple
    ell_new_col: tuple
    ell_srrqr_row: tuple
    ell_new_row: tuple
    eta: float = 1.1
    seed: int = 0
    accumulate_union: bool = False

    def __post_init__(self):
        for name in ("ell_srrqr_col", "ell_new_col", "ell_srrqr_row", "ell_new_row"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        h = len(self.ell_srrqr_col)
        if h < 1:
            raise InvalidInput("need at least one iteration")
        for name in ("ell_new_col", "ell_srrqr_row", "ell_new_row"):
            if len(getattr(self, name)) != h:
                raise InvalidInput(f"{name} must have length {h}")
        if self.ell_0 < 1:
            raise InvalidInput(f"ell_0 must be positive, got {self.ell_0}")
        if not self.eta > 1.0:
            raise InvalidInput(f"eta must exceed 1, got {self.eta}")
        if min(self.ell_srrqr_col) < 1 or min(self.ell_srrqr_row) < 1:
            raise InvalidInput("factorization counts must be at least 1")
        if min(self.ell_new_col) < 0 or min(self.ell_new_row) < 0:
            raise InvalidInput("fresh-index counts must be nonnegative")
        rows_avail = self.ell_0
        for i in range(h):
            if self.ell_srrqr_col[i] > rows_avail:
                raise InvalidInput(
                    f"iteration {i}: ell_srrqr_col={self.ell_srrqr_col[i]} exceeds "
                    f"the {rows_avail} rows available"
                )
            cols = self.ell_srrqr_col[i] + self.ell_new_col[i]
            if self.ell_srrqr_row[i] > cols:
                raise InvalidInput(
                    f"iteration {i}: ell_srrqr_row={self.ell_srrqr_row[i]} exceeds "
                    f"the {cols} columns available"
                )
            rows_avail = self.ell_srrqr_row[i] + self.ell_new_row[i]

    @property
    def iterations(self):
        return len(self.ell_srrqr_col)

    @classmethod
    def uniform(cls, ell_0, iterations, srrqr_col, new_col, srrqr_row, new_row, **kw):
        """Same counts every iteration."""
        h = int(iterations)
        return cls(
            ell_0=ell_0,
            ell_srrqr_col=(srrqr_col,) * h,
            ell_new_col=(new_col,) * h,
            ell_srrqr_row=(srrqr_row,) * h,
            ell_new_row=(new_row,) * h,
            **kw,
        )


@dataclass(frozen=True)
class SelectionStep:
    """Index sets produced by one column-then-row pass."""

    j_srrqr: IndexSet
    j_new: IndexSet
    j: IndexSet
    i_srrqr: IndexSet
    i_new: IndexSet
    i: IndexSet


@dataclass
class SelectionTrace:
    """Everything sampled and selected along the way.

    ``j0`` is only set by run_algorithm1 (the uniform column sample of
    its transposed pass). ``errors`` stays None until an experiment
    harness attaches per-step error metrics.
    """

    i0: IndexSet
    steps: tuple = ()
    j0: IndexSet = None
    errors: tuple = None


def _read_rows(a, idx):
    block = a[np.asarray(idx, dtype=np.int64), :]
    return np.asarray(block, dtype=np.float64)


def _read_cols(a, idx):
    block = a[:, np.asarray(idx, dtype=np.int64)]
    return np.asarray(block, dtype=np.float64)


def _shape(a):
    n, m = a.shape
    return int(n), int(m)


def run_algorithm1(a, params):
    """One-shot selection of rows and columns of ``a``.

    Returns (rows, cols, trace). The column pass samples ell_0 rows
    uniformly, selects ell_a columns of that strip by strong
    rank-revealing QR, and appends ell_b fresh uniform columns; the row
    pass does the same on the transpose with an independent RNG
    substream.
    """
    p = params
    n, m = _shape(a)
    if p.ell_0 > n or p.ell_0 > m:
        raise InvalidInput(f"ell_0={p.ell_0} exceeds a dimension of the {n}x{m} matrix")
    if p.ell_a + p.ell_b > min(n, m):
        raise InvalidInput(
            f"ell_a + ell_b = {p.ell_a + p.ell_b} exceeds min(n, m) = {min(n, m)}"
        )
    col_ss, row_ss = np.random.SeedSequence(p.seed).spawn(2)
    rng_c = np.random.default_rng(col_ss)
    rng_r = np.random.default_rng(row_ss)

    i0 = uniform_indices(n, p.ell_0, rng=rng_c)
    j_s = srrqr_select(_read_rows(a, i0), p.ell_a, eta=p.eta, rng=rng_c)
    j_n = uniform_indices(m, p.ell_b, exclude=j_s, rng=rng_c)
    j = IndexSet.columns(np.concatenate([j_s.indices, j_n]))

    j0 = uniform_indices(m, p.ell_0, rng=rng_r)
    picked = srrqr_select(np.ascontiguousarray(_read_cols(a, j0).T), p.ell_a, eta=p.eta, rng=rng_r)
    i_s = IndexSet.rows(picked.indices)
    i_n = uniform_indices(n, p.ell_b, exclude=i_s, rng=rng_r)
    i = IndexSet.rows(np.concatenate([i_s.indices, i_n]))

    step = SelectionStep(
        j_srrqr=j_s, j_new=IndexSet.columns(j_n), j=j,
        i_srrqr=i_s, i_new=IndexSet.rows(i_n), i=i,
    )
    trace = SelectionTrace(i0=IndexSet.rows(i0), steps=(step,), j0=IndexSet.columns(j0))
    return i, j, trace


def run_algorithm2(a, params):
    """Iterative alternating selection on ``a``.

    Returns (rows, cols, trace) after params.iterations sweeps. Each
    sweep h factors the current rows to select columns, then factors
    those columns to select rows; fresh uniform indices are appended to
    both per the params. All draws come from one sequential stream of
    the seed, so a trailing iteration never changes an earlier one.
    """
    p = params
    n, m = _shape(a)
    if p.ell_0 > n:
        raise InvalidInput(f"ell_0={p.ell_0} exceeds the row count {n}")
    for h in range(p.iterations):
        if p.ell_srrqr_col[h] + p.ell_new_col[h] > m:
            raise InvalidInput(f"iteration {h}: column request exceeds {m}")
        if p.ell_srrqr_row[h] + p.ell_new_row[h] > n:
            raise InvalidInput(f"iteration {h}: row request exceeds {n}")
    rng = np.random.default_rng(np.random.SeedSequence(p.seed))

    i_prev = uniform_indices(n, p.ell_0, rng=rng)
    i0 = IndexSet.rows(i_prev)
    steps = []
    for h in range(p.iterations):
        j_s = srrqr_select(_read_rows(a, i_prev), p.ell_srrqr_col[h], eta=p.eta, rng=rng)
        j_n = uniform_indices(m, p.ell_new_col[h], exclude=j_s, rng=rng)
        j_h = IndexSet.columns(np.concatenate([j_s.indices, j_n]))

        picked = srrqr_select(
            np.ascontiguousarray(_read_cols(a, j_h.indices).T),
            p.ell_srrqr_row[h], eta=p.eta, rng=rng,
        )
        i_s = IndexSet.rows(picked.indices)
        i_n = uniform_indices(n, p.ell_new_row[h], exclude=i_s, rng=rng)
        i_h = IndexSet.rows(np.concatenate([i_s.indices, i_n]))

        steps.append(SelectionStep(
            j_srrqr=j_s, j_new=IndexSet.columns(j_n), j=j_h,
            i_srrqr=i_s, i_new=IndexSet.rows(i_n), i=i_h,
        ))
        i_prev = i_h.indices

    trace = SelectionTrace(i0=i0, steps=tuple(steps))
    if p.accumulate_union:
        i_all, j_all = steps[0].i, steps[0].j
        for st in steps[1:]:
            i_all = i_all.union(st.i)
            j_all = j_all.union(st.j)
        return i_all, j_all, trace
    return steps[-1].i, steps[-1].j, trace
