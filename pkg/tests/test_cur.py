"""CUR assembly and error metrics.

Optimality of the projection middle matrix and the interpolation
property of the cross middle matrix are the two defining behaviors, so
both get direct numerical checks against perturbed alternatives."""

import numpy as np
import pytest

from curbench.cur import (
    CurFactors,
    build_cross_approximation,
    build_heuristic_cur,
    build_projection_cur,
    column_subset_error,
    cur_approximation,
    cur_error,
    row_subset_error,
)
from curbench.errors import InvalidInput
from curbench.linalg_core import IndexSet, orthonormal_range, spectral_norm


def _noisy_low_rank(rng, n, m, k, noise=1e-6):
    a = rng.standard_normal((n, k)) @ rng.standard_normal((k, m))
    return a + noise * rng.standard_normal((n, m))


def test_projection_factors_shapes_and_mode():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((12, 10))
    f = build_projection_cur(a, [1, 4, 7], [0, 3, 5, 9])
    assert isinstance(f, CurFactors)
    assert f.mode == "projection"
    assert f.c.shape == (12, 4)
    assert f.r.shape == (3, 10)
    assert f.m_mid.shape == (4, 3)
    assert np.array_equal(f.c, a[:, [0, 3, 5, 9]])
    assert np.array_equal(f.r, a[[1, 4, 7], :])
    full = cur_approximation(f)
    assert full.shape == a.shape
    assert np.allclose(full, f.c @ f.m_mid @ f.r)


def test_projection_middle_is_frobenius_optimal():
    rng = np.random.default_rng(1)
    a = _noisy_low_rank(rng, 20, 16, 4, noise=0.05)
    f = build_projection_cur(a, [0, 5, 9, 14, 18], [1, 3, 8, 11, 15])
    best = cur_error(a, f, norm="frobenius")
    for trial in range(8):
        bump = 1e-3 * rng.standard_normal(f.m_mid.shape)
        worse = CurFactors(f.c, f.m_mid + bump, f.r, f.mode, f.row_set, f.col_set)
        assert cur_error(a, worse, norm="frobenius") >= best


def test_cross_interpolates_selected_rows_and_columns():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((15, 15))
    i, j = [2, 6, 11], [0, 7, 13]
    f = build_cross_approximation(a, i, j)
    assert f.mode == "cross"
    approx = cur_approximation(f)
    scale = spectral_norm(a)
    assert np.max(np.abs(approx[i, :] - a[i, :])) < 1e-10 * scale
    assert np.max(np.abs(approx[:, j] - a[:, j])) < 1e-10 * scale


def test_cross_and_projection_recover_exact_low_rank():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((18, 3)) @ rng.standard_normal((3, 14))
    i, j = [0, 4, 9], [2, 5, 12]
    scale = spectral_norm(a)
    assert cur_error(a, build_cross_approximation(a, i, j)) < 1e-9 * scale
    assert cur_error(a, build_projection_cur(a, i, j)) < 1e-9 * scale


def test_cross_requires_square_intersection():
    a = np.random.default_rng(4).standard_normal((10, 10))
    with pytest.raises(InvalidInput):
        build_cross_approximation(a, [0, 1, 2], [3, 4])


def test_projection_error_matches_orthonormal_projector_route():
    rng = np.random.default_rng(5)
    a = _noisy_low_rank(rng, 22, 18, 5, noise=0.01)
    i, j = [1, 6, 10, 15, 20], [0, 4, 8, 12, 16]
    err_pinv = cur_error(a, build_projection_cur(a, i, j))
    qc = orthonormal_range(a[:, j])
    qr_ = orthonormal_range(np.ascontiguousarray(a[i, :].T))
    err_proj = spectral_norm(a - qc @ (qc.T @ a @ qr_) @ qr_.T)
    # both routes compute the same projection; on this well-conditioned
    # corpus the pinv detour costs only a modest number of ulps
    assert abs(err_pinv - err_proj) < 1e-8 * spectral_norm(a)


def test_heuristic_tracks_projection_on_sampled_blocks():
    rng = np.random.default_rng(6)
    a = _noisy_low_rank(rng, 40, 35, 3, noise=1e-4)
    i, j = [3, 17, 29], [5, 11, 30]
    big_i = [3, 17, 29, 0, 8, 22, 35]
    big_j = [5, 11, 30, 2, 14, 24, 33]
    f = build_heuristic_cur(a, i, j, big_i, big_j)
    assert f.mode == "heuristic"
    err_h = cur_error(a, f)
    err_p = cur_error(a, build_projection_cur(a, i, j))
    assert err_h <= 10 * err_p + 1e-12


def test_heuristic_requires_nested_sets():
    a = np.random.default_rng(7).standard_normal((10, 10))
    with pytest.raises(InvalidInput):
        build_heuristic_cur(a, [0, 5], [1, 2], [0, 3], [1, 2, 6])
    with pytest.raises(InvalidInput):
        build_heuristic_cur(a, [0, 5], [1, 2], [0, 5, 3], [2, 6])


def test_column_error_vanishes_when_span_is_covered():
    rng = np.random.default_rng(8)
    b = rng.standard_normal((20, 4))
    a = b @ rng.standard_normal((4, 17))
    # any 4 columns of a full-rank product span the whole range
    assert column_subset_error(a, [0, 3, 7, 12]) < 1e-10 * spectral_norm(a)
    assert row_subset_error(a.T, [0, 3, 7, 12]) < 1e-10 * spectral_norm(a)


def test_zero_column_selection_degrades_to_full_norm():
    a = np.zeros((6, 5))
    a[:, 0] = 0.0
    a[2, 3] = 2.5
    # the selected column is identically zero, so the projector is empty
    assert column_subset_error(a, [0]) == pytest.approx(2.5)
    assert row_subset_error(a, [0]) == pytest.approx(2.5)


def test_subset_error_shrinks_as_the_set_grows():
    rng = np.random.default_rng(9)
    a = _noisy_low_rank(rng, 25, 25, 6, noise=0.1)
    scale = spectral_norm(a)
    small = IndexSet.columns([1, 8])
    grown = small.union(IndexSet.columns([15, 21, 3]))
    assert column_subset_error(a, grown) <= column_subset_error(a, small) + 1e-10 * scale
    rows_small = IndexSet.rows([0, 10])
    rows_grown = rows_small.union(IndexSet.rows([17, 5]))
    assert row_subset_error(a, rows_grown) <= row_subset_error(a, rows_small) + 1e-10 * scale


def test_projection_error_splits_into_column_and_row_parts():
    rng = np.random.default_rng(10)
    for _ in range(10):
        a = _noisy_low_rank(rng, 20, 18, 4, noise=0.02)
        i = sorted(rng.choice(20, size=5, replace=False).tolist())
        j = sorted(rng.choice(18, size=5, replace=False).tolist())
        lhs = cur_error(a, build_projection_cur(a, i, j))
        rhs = column_subset_error(a, j) + row_subset_error(a, i)
        assert lhs <= rhs + 1e-8 * spectral_norm(a)


def test_error_norm_options():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((14, 12))
    f = build_projection_cur(a, [0, 5], [1, 7])
    assert cur_error(a, f, norm="frobenius") >= cur_error(a, f, norm="spectral")
    with pytest.raises(InvalidInput):
        cur_error(a, f, norm="nuclear")
    with pytest.raises(InvalidInput):
        column_subset_error(a, [0], norm="max")


def test_index_set_validation():
    a = np.random.default_rng(12).standard_normal((8, 8))
    with pytest.raises(InvalidInput):
        build_projection_cur(a, [], [0, 1])
    with pytest.raises(InvalidInput):
        # wrong-axis IndexSet offered as rows
        build_projection_cur(a, IndexSet.columns([0, 1]), [2, 3])
    with pytest.raises(IndexError):
        build_projection_cur(a, [0, 9], [1, 2])
