"""CUR factor assembly and error metrics.

A CUR approximation of ``a`` is ``c @ m_mid @ r`` where c holds full
selected columns, r full selected rows, and m_mid is a small middle
matrix. Three middle matrices are supported:

* projection: m_mid = pinv(c) @ a @ pinv(r), the Frobenius-optimal
  choice for the given index sets;
* cross: m_mid = pinv(a[I, J]), which interpolates a on the selected
  rows and columns and needs |I| == |J|;
* heuristic: m_mid = pinv(a[I_big, J]) @ a[I_big, J_big] @ pinv(a[I, J_big])
  for supersets I_big of I and J_big of J, reading only those rows and
  columns instead of all of a.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg_core import (
    COLUMNS,
    ROWS,
    IndexSet,
    as_matrix,
    orthonormal_range,
    pseudoinverse,
)

__all__ = [
    "CurFactors",
    "build_projection_cur",
    "build_cross_approximation",
    "build_heuristic_cur",
    "cur_approximation",
    "cur_error",
    "column_subset_error",
    "row_subset_error",
]


@dataclass(frozen=True)
class CurFactors:
    c: np.ndarray
    m_mid: np.ndarray
    r: np.ndarray
    mode: str
    row_set: IndexSet
    col_set: IndexSet


def _coerce(sel, axis, extent, what):
    if not isinstance(sel, IndexSet):
        sel = IndexSet(np.asarray(sel), axis)
    elif sel.axis != axis:
        raise InvalidInput(f"{what}: expected a {axis} index set, got {sel.axis}")
    if len(sel) == 0:
        raise InvalidInput(f"{what}: empty index set")
    sel.validate(extent)
    return sel


def _matnorm(x, norm):
    if norm == "spectral":
        return float(np.linalg.norm(x, 2))
    if norm == "frobenius":
        return float(np.linalg.norm(x, "fro"))
    raise InvalidInput(f"norm must be 'spectral' or 'frobenius', got {norm!r}")


def build_projection_cur(a, row_set, col_set, rel_tol=1e-12):
    """CUR factors with the Frobenius-optimal middle matrix for (I, J)."""
    arr = as_matrix(a)
    i = _coerce(row_set, ROWS, arr.shape[0], "row_set")
    j = _coerce(col_set, COLUMNS, arr.shape[1], "col_set")
    c = np.ascontiguousarray(arr[:, j.indices])
    r = np.ascontiguousarray(arr[i.indices, :])
    m_mid = pseudoinverse(c, rel_tol) @ arr @ pseudoinverse(r, rel_tol)
    return CurFactors(c=c, m_mid=m_mid, r=r, mode="projection", row_set=i, col_set=j)


def build_cross_approximation(a, row_set, col_set, rel_tol=1e-12):
    """CUR factors with m_mid = pinv(a[I, J]); requires |I| == |J|.

    The result interpolates ``a`` on the selected rows and columns when
    a[I, J] is invertible.
    """
    arr = as_matrix(a)
    i = _coerce(row_set, ROWS, arr.shape[0], "row_set")
    j = _coerce(col_set, COLUMNS, arr.shape[1], "col_set")
    if len(i) != len(j):
        raise InvalidInput(
            f"cross approximation needs |I| == |J|, got {len(i)} and {len(j)}"
        )
    c = np.ascontiguousarray(arr[:, j.indices])
    r = np.ascontiguousarray(arr[i.indices, :])
    m_mid = pseudoinverse(arr[np.ix_(i.indices, j.indices)], rel_tol)
    return CurFactors(c=c, m_mid=m_mid, r=r, mode="cross", row_set=i, col_set=j)


def build_heuristic_cur(a, row_set, col_set, big_row_set, big_col_set, rel_tol=1e-12):
    """CUR factors whose middle matrix is estimated from sampled blocks.

    Only rows in big_row_set and columns in big_col_set of ``a`` are
    read. row_set must be contained in big_row_set and col_set in
    big_col_set.
    """
    arr = as_matrix(a)
    i = _coerce(row_set, ROWS, arr.shape[0], "row_set")
    j = _coerce(col_set, COLUMNS, arr.shape[1], "col_set")
    bi = _coerce(big_row_set, ROWS, arr.shape[0], "big_row_set")
    bj = _coerce(big_col_set, COLUMNS, arr.shape[1], "big_col_set")
    if not set(i.indices.tolist()) <= set(bi.indices.tolist()):
        raise InvalidInput("row_set must be a subset of big_row_set")
    if not set(j.indices.tolist()) <= set(bj.indices.tolist()):
        raise InvalidInput("col_set must be a subset of big_col_set")
    c = np.ascontiguousarray(arr[:, j.indices])
    r = np.ascontiguousarray(arr[i.indices, :])
    m_mid = (
        pseudoinverse(arr[np.ix_(bi.indices, j.indices)], rel_tol)
        @ arr[np.ix_(bi.indices, bj.indices)]
        @ pseudoinverse(arr[np.ix_(i.indices, bj.indices)], rel_tol)
    )
    return CurFactors(c=c, m_mid=m_mid, r=r, mode="heuristic", row_set=i, col_set=j)


def cur_approximation(factors):
    """Materialize the full n-by-m approximation (debug/desk scale only)."""
    return (factors.c @ factors.m_mid) @ factors.r


def cur_error(a, factors, norm="spectral"):
    """Norm of ``a - c @ m_mid @ r``.

    The residual is formed once from the factors without building the
    approximation as a standalone intermediate.
    """
    arr = as_matrix(a)
    resid = arr - (factors.c @ factors.m_mid) @ factors.r
    return _matnorm(resid, norm)


def column_subset_error(a, col_set, norm="spectral", rel_tol=1e-12):
    """Error of projecting ``a`` onto the span of its columns J."""
    arr = as_matrix(a)
    j = _coerce(col_set, COLUMNS, arr.shape[1], "col_set")
    q = orthonormal_range(arr[:, j.indices], rel_tol)
    if q.shape[1] == 0:
        return _matnorm(arr, norm)
    return _matnorm(arr - q @ (q.T @ arr), norm)


def row_subset_error(a, row_set, norm="spectral", rel_tol=1e-12):
    """Error of projecting ``a`` onto the row space of its rows I."""
    arr = as_matrix(a)
    i = _coerce(row_set, ROWS, arr.shape[0], "row_set")
    q = orthonormal_range(np.ascontiguousarray(arr[i.indices, :].T), rel_tol)
    if q.shape[1] == 0:
        return _matnorm(arr, norm)
    return _matnorm(arr - (arr @ q) @ q.T, norm)
