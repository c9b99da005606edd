"""Strong rank-revealing QR column selection.

srrqr(a, k) permutes the columns of ``a`` so that
``a[:, permutation] = Q @ [[a_k, b_k], [0, c_k]]`` with a_k upper
triangular k-by-k, and the leading k columns form a well-conditioned
basis for the dominant column space:

  (a) sigma_i(a_k) >= sigma_i(a) / sqrt(1 + eta^2 k (n - k))
  (b) sigma_j(c_k) <= sigma_(k+j)(a) * sqrt(1 + eta^2 k (n - k))
  (c) every entry of inv(a_k) @ b_k has magnitude at most eta

The swap phase follows the classical determinant-greedy interchange rule
with threshold eta > 1, which terminates because each swap grows
|det a_k| by more than eta. If the residual becomes numerically zero
before k pivots are placed, the remaining pivots are drawn uniformly at
random from the still unselected columns; the interchange phase is
skipped in that case because every completion spans the column space.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import kernel_set
from .errors import InvalidInput, NumericalFailure
from .linalg_core import IndexSet, as_matrix

__all__ = ["SrrqrResult", "srrqr", "srrqr_select"]

# residual columns with norm below this times ||a||_F count as zero
ZERO_RESIDUAL_REL = 1e-13


@dataclass(frozen=True)
class SrrqrResult:
    """Outcome of srrqr; Q is never materialized, only the R blocks."""

    selected_cols: IndexSet
    permutation: np.ndarray
    a_k: np.ndarray
    b_k: np.ndarray
    c_k: np.ndarray
    eta: float
    swaps: int
    rank_hint: int


def srrqr(a, k, eta=1.1, rng=None, backend=None):
    """Factor ``a`` with a strong rank-revealing column permutation.

    Parameters
    ----------
    a : (n, m) array_like
        Dense matrix, any shape with 1 <= k <= min(n, m).
    k : int
        Number of columns to select.
    eta : float
        Interchange threshold, strictly greater than 1. Larger values
        mean fewer swaps and weaker bounds.
    rng : None, int, or numpy Generator
        Consumed only when the residual hits numerical zero early and
        random pivots are needed.
    backend : None, "numpy" or "numba"
        Kernel path override; None uses the process default.

    Returns
    -------
    SrrqrResult
    """
    arr = as_matrix(a)
    n, m = arr.shape
    k = int(k)
    if not 1 <= k <= min(n, m):
        raise InvalidInput(f"k must lie in [1, min(n, m)] = [1, {min(n, m)}], got {k}")
    if not eta > 1.0:
        raise InvalidInput(f"eta must exceed 1, got {eta}")
    rng = np.random.default_rng(rng)
    ks = kernel_set(backend)

    r = arr.copy()
    perm = np.arange(m, dtype=np.int64)
    ztol = ZERO_RESIDUAL_REL * np.linalg.norm(arr, "fro")
    reached = int(ks.qrcp_partial(r, perm, k, ztol))
    swaps = 0

    if reached < k:
        offsets = rng.choice(m - reached, size=k - reached, replace=False)
        chosen = reached + np.asarray(offsets, dtype=np.int64)
        mask = np.zeros(m, dtype=bool)
        mask[chosen] = True
        rest = np.arange(reached, m, dtype=np.int64)
        rest = rest[~mask[reached:]]
        new_order = np.concatenate([chosen, rest])
        r[:, reached:] = r[:, new_order]
        perm[reached:] = perm[new_order]
        ks.eliminate_columns(r, reached, k)
    elif m > k:
        cap = int(50 * k * max(1.0, np.log(max(n, m))))
        while True:
            i, j, rho = ks.interchange_candidate(r, k)
            if not rho > eta:
                break
            if swaps >= cap:
                raise NumericalFailure(
                    f"interchange phase exceeded {cap} swaps (k={k}, shape {n}x{m})"
                )
            pi, pj = int(i), int(k + j)
            perm[pi], perm[pj] = perm[pj], perm[pi]
            r = np.ascontiguousarray(arr[:, perm])
            ks.eliminate_columns(r, 0, k)
            swaps += 1

    a_k = np.triu(r[:k, :k])
    b_k = r[:k, k:].copy()
    c_k = r[k:, k:].copy()
    return SrrqrResult(
        selected_cols=IndexSet.columns(perm[:k]),
        permutation=perm,
        a_k=a_k,
        b_k=b_k,
        c_k=c_k,
        eta=float(eta),
        swaps=swaps,
        rank_hint=reached,
    )


def srrqr_select(a, k, eta=1.1, rng=None, backend=None):
    """Selected column index set of srrqr, same arguments."""
    return srrqr(a, k, eta=eta, rng=rng, backend=backend).selected_cols
