"""Hot factorization kernels with two execution paths.

The same source compiles under numba's nopython mode and also runs as
plain vectorized numpy. The CURBENCH_NUMBA environment variable selects
the default path: "1" forces numba, "0" forces numpy, anything else
(or unset) means numba when importable. kernel_set("numpy") and
kernel_set("numba") hand out a specific path regardless of the default,
which is how the two are benchmarked against each other in one process.

All kernels mutate ``r`` (float64, C contiguous) in place and treat the
leading ``k`` columns as the currently selected block.
"""

import os
from collections import namedtuple

import numpy as np

from .errors import InvalidInput

__all__ = ["KernelSet", "kernel_set", "active_backend", "set_backend", "numba_available"]

ENV_FLAG = "CURBENCH_NUMBA"

KernelSet = namedtuple(
    "KernelSet", ["name", "qrcp_partial", "eliminate_columns", "interchange_candidate"]
)


def _qrcp_partial(r, perm, k, ztol):
    """Partial QR with column pivoting, k steps, recording swaps in perm.

    Stops early and returns the number of pivots placed when the largest
    remaining column norm drops to ztol or below; returns k otherwise.
    """
    n, m = r.shape
    for t in range(k):
        g = np.sum(r[t:] * r[t:], axis=0)
        jbest = t
        best = g[t]
        for j in range(t + 1, m):
            if g[j] > best:
                best = g[j]
                jbest = j
        if np.sqrt(best) <= ztol:
            return t
        if jbest != t:
            for i in range(n):
                tmp = r[i, t]
                r[i, t] = r[i, jbest]
                r[i, jbest] = tmp
            p = perm[t]
            perm[t] = perm[jbest]
            perm[jbest] = p
        v = r[t:, t].copy()
        nrm = np.sqrt(np.sum(v * v))
        if nrm > 0.0:
            s = 1.0 if v[0] >= 0.0 else -1.0
            v[0] += s * nrm
            scale = 2.0 / np.sum(v * v)
            w = np.dot(v, r[t:])
            r[t:] -= scale * np.outer(v, w)
            r[t, t] = -s * nrm
            r[t + 1 :, t] = 0.0
    return k


def _eliminate_columns(r, lo, hi):
    """Householder-triangularize columns lo..hi-1 without pivoting."""
    n, m = r.shape
    for t in range(lo, hi):
        v = r[t:, t].copy()
        nrm = np.sqrt(np.sum(v * v))
        if nrm == 0.0:
            continue
        s = 1.0 if v[0] >= 0.0 else -1.0
        v[0] += s * nrm
        scale = 2.0 / np.sum(v * v)
        w = np.dot(v, r[t:])
        r[t:] -= scale * np.outer(v, w)
        r[t, t] = -s * nrm
        r[t + 1 :, t] = 0.0


def _interchange_candidate(r, k):
    """Best column interchange for the rank-revealing swap phase.

    For the triangularized r = [[A, B], [0, C]] (A the leading k-by-k
    upper triangle), returns (i, j, rho) maximizing
    rho(i, j) = sqrt( (A^-1 B)_ij^2 + (omega_i * gamma_j)^2 )
    over selected column i and trailing column j, where omega_i is the
    i-th row norm of A^-1 and gamma_j the j-th column norm of C. A swap
    of columns i and k+j multiplies |det A| by rho(i, j).
    """
    n, m = r.shape
    kinv = np.zeros((k, k))
    for j in range(k):
        kinv[j, j] = 1.0 / r[j, j]
        for i in range(j - 1, -1, -1):
            acc = 0.0
            for l in range(i + 1, j + 1):
                acc += r[i, l] * kinv[l, j]
            kinv[i, j] = -acc / r[i, i]
    omega = np.sqrt(np.sum(kinv * kinv, axis=1))
    ab = r[:k, k:].copy()
    for i in range(k - 1, -1, -1):
        for l in range(i + 1, k):
            ab[i] -= r[i, l] * ab[l]
        ab[i] /= r[i, i]
    if n > k:
        g = np.sum(r[k:] * r[k:], axis=0)
        gamma = np.sqrt(g[k:])
    else:
        gamma = np.zeros(m - k)
    rho = np.sqrt(ab * ab + np.outer(omega, gamma) ** 2)
    flat = np.argmax(rho)
    i = flat // (m - k)
    j = flat - i * (m - k)
    return i, j, rho[i, j]


def numba_available():
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


_sets = {}
_active = None


def _build(backend):
    if backend == "numpy":
        return KernelSet("numpy", _qrcp_partial, _eliminate_columns, _interchange_candidate)
    if backend == "numba":
        from numba import njit

        jit = njit(cache=True)
        return KernelSet(
            "numba", jit(_qrcp_partial), jit(_eliminate_columns), jit(_interchange_candidate)
        )
    raise InvalidInput(f"unknown kernel backend {backend!r}")


def kernel_set(backend=None):
    """Kernels for ``backend`` ("numpy" or "numba"), default per active_backend()."""
    name = backend or active_backend()
    if name not in _sets:
        _sets[name] = _build(name)
    return _sets[name]


def active_backend():
    """Resolve the default backend from CURBENCH_NUMBA (cached after first call)."""
    global _active
    if _active is None:
        flag = os.environ.get(ENV_FLAG, "auto").strip().lower()
        if flag in ("0", "off", "numpy", "false"):
            _active = "numpy"
        elif flag in ("1", "on", "numba", "true"):
            if not numba_available():
                raise RuntimeError(f"{ENV_FLAG}={flag} but numba is not importable")
            _active = "numba"
        else:
            _active = "numba" if numba_available() else "numpy"
    return _active


def set_backend(name):
    """Override the default backend in-process; None re-reads the environment."""
    global _active
    if name not in (None, "numpy", "numba"):
        raise InvalidInput(f"unknown kernel backend {name!r}")
    _active = name
