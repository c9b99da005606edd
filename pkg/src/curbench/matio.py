"""Matrix file I/O: plain CSV and a small binary format.

The binary format has a 16 byte header (magic ``DMAT``, u32 row count,
u32 column count, 4 reserved zero bytes, all little endian) followed by
the entries as little-endian float64 in row-major order.
"""

import struct

import numpy as np

from .errors import InvalidInput
from .linalg_core import as_matrix

__all__ = ["save_matrix", "load_matrix", "save_csv", "load_csv", "save_dmat", "load_dmat"]

MAGIC = b"DMAT"
_HEADER = struct.Struct("<4sII4x")


def save_csv(path, a):
    arr = as_matrix(a)
    np.savetxt(path, arr, delimiter=",", fmt="%.17g")


def load_csv(path):
    arr = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return as_matrix(arr, name=str(path))


def save_dmat(path, a):
    arr = as_matrix(a)
    n, m = arr.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, m))
        fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_dmat(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise InvalidInput(f"{path}: truncated header")
        magic, n, m = _HEADER.unpack(head)
        if magic != MAGIC:
            raise InvalidInput(f"{path}: bad magic {magic!r}")
        body = fh.read(8 * n * m)
    if len(body) != 8 * n * m:
        raise InvalidInput(f"{path}: expected {n}x{m} entries, file too short")
    arr = np.frombuffer(body, dtype="<f8").reshape(n, m)
    return as_matrix(arr, name=str(path))


def _looks_binary(path):
    with open(path, "rb") as fh:
        return fh.read(4) == MAGIC


def save_matrix(path, a, fmt=None):
    """Write a matrix; ``fmt`` is 'csv' or 'dmat', default inferred from suffix."""
    fmt = fmt or ("dmat" if str(path).endswith(".dmat") else "csv")
    if fmt == "csv":
        save_csv(path, a)
    elif fmt == "dmat":
        save_dmat(path, a)
    else:
        raise InvalidInput(f"unknown matrix format {fmt!r}")


def load_matrix(path):
    """Read a matrix, sniffing the binary magic before falling back to CSV."""
    if _looks_binary(path):
        return load_dmat(path)
    return load_csv(path)
