"""Dense linear-algebra primitives shared by the selection and CUR layers.

Matrices are plain float64 numpy arrays. Index sets carry an axis tag so a
row set cannot silently be applied to columns. Factorizations are delegated
to LAPACK through numpy.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NotOrthonormal, NumericalFailure

__all__ = [
    "IndexSet",
    "SvdResult",
    "as_matrix",
    "svd",
    "spectral_norm",
    "frobenius_norm",
    "chebyshev_norm",
    "pseudoinverse",
    "submatrix",
    "coherence",
    "sigma_min_block_bound",
    "orthonormal_range",
]

ROWS = "rows"
COLUMNS = "columns"


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a 2-d float64 C-ordered array with finite entries.

    Raises InvalidInput for wrong dimensionality, empty shapes, or any
    NaN/Inf entry.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInput(f"{name} must be 2-d, got ndim={arr.ndim}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInput(f"{name} must be nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return np.ascontiguousarray(arr)


def _as_index_array(ids, what="index set"):
    arr = np.asarray(ids, dtype=np.int64).ravel()
    if arr.size and arr.min() < 0:
        raise InvalidInput(f"{what} contains negative indices")
    # dedupe, keeping first occurrence so selection order survives
    _, first = np.unique(arr, return_index=True)
    return arr[np.sort(first)]


@dataclass(frozen=True)
class IndexSet:
    """An ordered, duplicate-free set of row or column indices."""

    indices: np.ndarray
    axis: str

    def __post_init__(self):
        if self.axis not in (ROWS, COLUMNS):
            raise InvalidInput(f"axis must be {ROWS!r} or {COLUMNS!r}")
        arr = _as_index_array(self.indices)
        arr.setflags(write=False)
        object.__setattr__(self, "indices", arr)

    @classmethod
    def rows(cls, ids):
        return cls(np.asarray(ids), ROWS)

    @classmethod
    def columns(cls, ids):
        return cls(np.asarray(ids), COLUMNS)

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __contains__(self, i):
        return bool(np.any(self.indices == int(i)))

    def union(self, other):
        """Union preserving this set's order, then the new indices of ``other``."""
        if other.axis != self.axis:
            raise InvalidInput("cannot union index sets on different axes")
        return IndexSet(np.concatenate([self.indices, other.indices]), self.axis)

    def validate(self, extent):
        if len(self) and int(self.indices.max()) >= extent:
            raise IndexError(
                f"index {int(self.indices.max())} out of range for extent {extent}"
            )
        return self


@dataclass(frozen=True)
class SvdResult:
    """Full SVD ``a = left @ diag(s) @ right.T`` (columns are singular vectors)."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def truncate(self, rank):
        """Best rank-``rank`` reconstruction."""
        r = int(rank)
        u = self.left_vectors[:, :r]
        v = self.right_vectors[:, :r]
        return (u * self.singular_values[:r]) @ v.T


def svd(a):
    """Full singular value decomposition of a dense matrix.

    Returns an SvdResult with square orthogonal factors and singular values
    in non-increasing order. Raises NumericalFailure if LAPACK does not
    converge.
    """
    arr = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(arr, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return SvdResult(u, s, vh.T)


def singular_values(a):
    """Singular values only (cheaper than a full svd)."""
    arr = as_matrix(a)
    try:
        return np.linalg.svd(arr, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def spectral_norm(a):
    """Largest singular value."""
    return float(singular_values(a)[0])


def frobenius_norm(a):
    return float(np.linalg.norm(as_matrix(a), "fro"))


def chebyshev_norm(a):
    """Largest entry magnitude."""
    return float(np.max(np.abs(as_matrix(a))))


def pseudoinverse(a, rel_tol=1e-12):
    """Moore-Penrose pseudoinverse with relative singular value cutoff.

    Singular values at or below ``rel_tol`` times the largest are treated
    as zero, which keeps the result stable on numerically rank-deficient
    input.
    """
    arr = as_matrix(a)
    if not (0.0 <= rel_tol < 1.0):
        raise InvalidInput(f"rel_tol must lie in [0, 1), got {rel_tol}")
    try:
        return np.linalg.pinv(arr, rcond=rel_tol)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"pseudoinverse did not converge: {exc}") from exc


def _resolve_indices(sel, axis, extent, what):
    if sel is None:
        return np.arange(extent)
    if isinstance(sel, IndexSet):
        if sel.axis != axis:
            raise InvalidInput(f"{what}: expected a {axis} index set, got {sel.axis}")
        arr = sel.indices
    else:
        arr = np.asarray(sel, dtype=np.int64).ravel()
    if arr.size == 0:
        raise InvalidInput(f"{what}: empty index selection")
    if arr.min() < 0 or arr.max() >= extent:
        raise IndexError(f"{what}: indices out of range for extent {extent}")
    return arr


def submatrix(a, rows=None, cols=None):
    """Extract ``a[rows, cols]`` as a fresh array; None selects everything.

    Accepts IndexSet (axis is checked) or any integer sequence. Indices out
    of range raise IndexError.
    """
    arr = as_matrix(a)
    ri = _resolve_indices(rows, ROWS, arr.shape[0], "rows")
    ci = _resolve_indices(cols, COLUMNS, arr.shape[1], "cols")
    return np.ascontiguousarray(arr[np.ix_(ri, ci)])


def coherence(x, tol=1e-8):
    """Coherence of a matrix with orthonormal columns.

    For an n-by-k matrix X with orthonormal columns this is
    ``n * max_ij X_ij^2``, which lies in [1, n]. Orthonormality is checked
    entrywise to ``tol``; violations raise NotOrthonormal.
    """
    arr = as_matrix(x)
    n, k = arr.shape
    if k > n:
        raise InvalidInput("coherence needs a tall matrix (more rows than columns)")
    gram_err = np.max(np.abs(arr.T @ arr - np.eye(k)))
    if gram_err > tol:
        raise NotOrthonormal(
            f"columns are not orthonormal: max Gram deviation {gram_err:.3e} > {tol:.1e}"
        )
    return float(n * np.max(arr * arr))


def sigma_min_block_bound(delta_a, delta_c, b):
    """Lower bound on the smallest singular value of [[A, B], [0, C]].

    Given sigma_min(A) >= delta_a, sigma_min(C) >= delta_c and ||B|| <= b
    (all positive, A and C with full column rank), the block matrix has
    sigma_min >= delta_a * delta_c / sqrt(b^2 + delta_a^2 + delta_c^2).
    """
    if delta_a <= 0 or delta_c <= 0 or b <= 0:
        raise InvalidInput("delta_a, delta_c and b must be positive")
    return float(delta_a * delta_c / np.sqrt(b * b + delta_a * delta_a + delta_c * delta_c))


def orthonormal_range(a, rel_tol=1e-12):
    """Orthonormal basis of the numerical column space of ``a``.

    Columns are left singular vectors whose singular value exceeds
    ``rel_tol`` times the largest. A numerically zero matrix yields a
    basis with zero columns.
    """
    arr = as_matrix(a)
    try:
        u, s, _ = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    keep = s > rel_tol * s[0]
    return np.ascontiguousarray(u[:, keep])
