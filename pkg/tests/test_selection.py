"""Randomized selection: sampling invariants, seeded reproducibility,
and the sublinear access pattern (checked with a counting matrix proxy,
since both entry points promise to touch only row and column strips)."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from curbench.errors import InvalidInput
from curbench.linalg_core import COLUMNS, ROWS, IndexSet
from curbench.selection import (
    Algorithm1Params,
    Algorithm2Params,
    run_algorithm1,
    run_algorithm2,
    uniform_indices,
)


class CountingMatrix:
    """Array stand-in that serves indexed reads and tallies them."""

    def __init__(self, a):
        self._a = np.asarray(a, dtype=np.float64)
        self.entries_read = 0

    @property
    def shape(self):
        return self._a.shape

    def __getitem__(self, key):
        block = self._a[key]
        self.entries_read += block.size
        return block


# ---------------------------------------------------------------- sampling


def test_uniform_indices_distinct_and_in_range():
    idx = uniform_indices(50, 12, rng=0)
    assert idx.dtype == np.int64
    assert len(idx) == 12
    assert len(set(idx.tolist())) == 12
    assert idx.min() >= 0 and idx.max() < 50


def test_uniform_indices_honors_exclusion():
    banned = IndexSet.rows([0, 1, 2, 3])
    idx = uniform_indices(6, 2, exclude=banned, rng=1)
    assert set(idx.tolist()) == {4, 5}


def test_uniform_indices_seeded_and_empty():
    a = uniform_indices(100, 7, rng=42)
    b = uniform_indices(100, 7, rng=42)
    assert np.array_equal(a, b)
    assert uniform_indices(10, 0).size == 0


@pytest.mark.parametrize(
    "extent,count,exclude",
    [(0, 1, None), (-3, 1, None), (10, -1, None), (10, 11, None), (5, 3, [0, 1, 2])],
)
def test_uniform_indices_rejects_impossible_draws(extent, count, exclude):
    with pytest.raises(InvalidInput):
        uniform_indices(extent, count, exclude=exclude, rng=0)


@given(
    extent=st.integers(min_value=1, max_value=60),
    count=st.integers(min_value=0, max_value=60),
    seed=st.integers(min_value=0, max_value=2**20),
)
def test_uniform_indices_properties(extent, count, seed):
    if count > extent:
        with pytest.raises(InvalidInput):
            uniform_indices(extent, count, rng=seed)
        return
    idx = uniform_indices(extent, count, rng=seed)
    assert len(idx) == count
    assert len(np.unique(idx)) == count
    assert np.all((idx >= 0) & (idx < extent))


# ------------------------------------------------------------------ params


def test_algorithm1_params_validation():
    Algorithm1Params(ell_0=4, ell_a=2, ell_b=2)
    with pytest.raises(InvalidInput):
        Algorithm1Params(ell_0=2, ell_a=3, ell_b=1)
    with pytest.raises(InvalidInput):
        Algorithm1Params(ell_0=4, ell_a=0, ell_b=1)
    with pytest.raises(InvalidInput):
        Algorithm1Params(ell_0=4, ell_a=2, ell_b=-1)
    with pytest.raises(InvalidInput):
        Algorithm1Params(ell_0=4, ell_a=2, ell_b=2, eta=1.0)


def test_algorithm2_params_validation():
    p = Algorithm2Params.uniform(5, 2, 2, 1, 2, 1)
    assert p.iterations == 2
    assert p.ell_srrqr_col == (2, 2)
    with pytest.raises(InvalidInput):
        Algorithm2Params(ell_0=4, ell_srrqr_col=(), ell_new_col=(), ell_srrqr_row=(), ell_new_row=())
    with pytest.raises(InvalidInput):
        Algorithm2Params(ell_0=4, ell_srrqr_col=(2, 2), ell_new_col=(1,), ell_srrqr_row=(2, 2), ell_new_row=(1, 1))
    with pytest.raises(InvalidInput):
        # first sweep only leaves 2 rows, second asks to factor 3 columns from them
        Algorithm2Params(ell_0=4, ell_srrqr_col=(2, 3), ell_new_col=(0, 0), ell_srrqr_row=(2, 2), ell_new_row=(0, 0))
    with pytest.raises(InvalidInput):
        Algorithm2Params.uniform(4, 1, 5, 0, 2, 0)  # factoring 5 cols from 4 rows


# ------------------------------------------------------------- algorithm 1


def test_algorithm1_cardinalities_and_axes():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((40, 30))
    p = Algorithm1Params(ell_0=6, ell_a=3, ell_b=4, seed=17)
    rows, cols, trace = run_algorithm1(a, p)
    assert rows.axis == ROWS and cols.axis == COLUMNS
    assert len(rows) == 7 and len(cols) == 7
    assert len(trace.i0) == 6 and len(trace.j0) == 6
    assert len(trace.steps) == 1
    step = trace.steps[0]
    assert len(step.j_srrqr) == 3 and len(step.j_new) == 4
    # fresh picks exclude the factorization picks, so no overlap
    assert not set(step.j_new.indices) & set(step.j_srrqr.indices)
    assert np.array_equal(cols.indices, np.concatenate([step.j_srrqr.indices, step.j_new.indices]))


def test_algorithm1_is_seed_deterministic():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((25, 25))
    p = Algorithm1Params(ell_0=5, ell_a=2, ell_b=2, seed=3)
    r1, c1, _ = run_algorithm1(a, p)
    r2, c2, _ = run_algorithm1(a, p)
    assert np.array_equal(r1.indices, r2.indices)
    assert np.array_equal(c1.indices, c2.indices)
    r3, c3, _ = run_algorithm1(a, Algorithm1Params(ell_0=5, ell_a=2, ell_b=2, seed=4))
    assert not (np.array_equal(r1.indices, r3.indices) and np.array_equal(c1.indices, c3.indices))


def test_algorithm1_passes_use_independent_substreams():
    """The row pass and column pass each consume their own spawned
    stream; replaying either one alone reproduces its half."""
    rng = np.random.default_rng(2)
    a = rng.standard_normal((30, 30))
    p = Algorithm1Params(ell_0=5, ell_a=2, ell_b=2, seed=9)
    _, _, trace = run_algorithm1(a, p)
    col_ss, row_ss = np.random.SeedSequence(9).spawn(2)
    assert np.array_equal(
        trace.i0.indices, uniform_indices(30, 5, rng=np.random.default_rng(col_ss))
    )
    assert np.array_equal(
        trace.j0.indices, uniform_indices(30, 5, rng=np.random.default_rng(row_ss))
    )


def test_algorithm1_reads_sublinearly():
    rng = np.random.default_rng(3)
    proxy = CountingMatrix(rng.standard_normal((300, 240)))
    p = Algorithm1Params(ell_0=8, ell_a=4, ell_b=4, seed=0)
    rows, cols, _ = run_algorithm1(proxy, p)
    assert len(rows) == 8 and len(cols) == 8
    # one ell_0-row strip and one ell_0-column strip, nothing else
    assert proxy.entries_read == 8 * 240 + 300 * 8
    assert proxy.entries_read < proxy._a.size // 10


def test_algorithm1_rejects_oversized_requests():
    a = np.random.default_rng(4).standard_normal((10, 8))
    with pytest.raises(InvalidInput):
        run_algorithm1(a, Algorithm1Params(ell_0=9, ell_a=2, ell_b=2))
    with pytest.raises(InvalidInput):
        run_algorithm1(a, Algorithm1Params(ell_0=6, ell_a=4, ell_b=5))


# ------------------------------------------------------------- algorithm 2


def test_algorithm2_step_counts_and_final_sets():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((35, 28))
    p = Algorithm2Params.uniform(6, 3, 3, 2, 3, 2, seed=21)
    rows, cols, trace = run_algorithm2(a, p)
    assert len(trace.steps) == 3
    assert trace.j0 is None
    assert len(trace.i0) == 6
    assert np.array_equal(rows.indices, trace.steps[-1].i.indices)
    assert np.array_equal(cols.indices, trace.steps[-1].j.indices)
    assert len(rows) == 5 and len(cols) == 5
    for step in trace.steps:
        assert len(step.j) == 5 and len(step.i) == 5


def test_algorithm2_prefix_stability():
    """Adding a sweep must not disturb the sweeps before it."""
    rng = np.random.default_rng(6)
    a = rng.standard_normal((30, 30))
    short = Algorithm2Params.uniform(5, 1, 2, 2, 2, 2, seed=8)
    long = Algorithm2Params.uniform(5, 3, 2, 2, 2, 2, seed=8)
    _, _, t_short = run_algorithm2(a, short)
    _, _, t_long = run_algorithm2(a, long)
    assert np.array_equal(t_short.i0.indices, t_long.i0.indices)
    assert np.array_equal(t_short.steps[0].i.indices, t_long.steps[0].i.indices)
    assert np.array_equal(t_short.steps[0].j.indices, t_long.steps[0].j.indices)


def test_algorithm2_union_accumulates_all_steps():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((40, 40))
    p = Algorithm2Params.uniform(6, 4, 2, 2, 2, 2, seed=13, accumulate_union=True)
    rows, cols, trace = run_algorithm2(a, p)
    want_rows = trace.steps[0].i
    want_cols = trace.steps[0].j
    for step in trace.steps[1:]:
        want_rows = want_rows.union(step.i)
        want_cols = want_cols.union(step.j)
    assert np.array_equal(rows.indices, want_rows.indices)
    assert np.array_equal(cols.indices, want_cols.indices)
    # the union covers every step but never the seed rows as such
    assert len(rows) >= len(trace.steps[-1].i)


def test_algorithm2_union_matches_last_step_draws():
    """Union mode only changes what is returned, not what is drawn."""
    rng = np.random.default_rng(8)
    a = rng.standard_normal((30, 30))
    base = dict(ell_0=5, iterations=2, srrqr_col=2, new_col=2, srrqr_row=2, new_row=2, seed=30)
    _, _, t_plain = run_algorithm2(a, Algorithm2Params.uniform(**base))
    _, _, t_union = run_algorithm2(
        a, Algorithm2Params.uniform(**base, accumulate_union=True)
    )
    for s_plain, s_union in zip(t_plain.steps, t_union.steps):
        assert np.array_equal(s_plain.i.indices, s_union.i.indices)
        assert np.array_equal(s_plain.j.indices, s_union.j.indices)


def test_algorithm2_reads_only_strips():
    rng = np.random.default_rng(9)
    proxy = CountingMatrix(rng.standard_normal((250, 200)))
    p = Algorithm2Params.uniform(6, 2, 3, 1, 3, 1, seed=0)
    run_algorithm2(proxy, p)
    # sweep 1: 6-row strip + 4-column strip; sweep 2: 4-row strip + 4-column strip
    assert proxy.entries_read == (6 * 200 + 250 * 4) + (4 * 200 + 250 * 4)


def test_algorithm2_rejects_oversized_requests():
    a = np.random.default_rng(10).standard_normal((12, 10))
    with pytest.raises(InvalidInput):
        run_algorithm2(a, Algorithm2Params.uniform(13, 1, 2, 2, 2, 2))
    with pytest.raises(InvalidInput):
        run_algorithm2(a, Algorithm2Params.uniform(6, 1, 5, 6, 2, 2))
    with pytest.raises(InvalidInput):
        run_algorithm2(a, Algorithm2Params.uniform(6, 1, 2, 2, 4, 9))
