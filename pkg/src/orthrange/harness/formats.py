"""Flat-file point and rectangle formats.

Text: one record per line, space-separated decimal coordinates with an
optional trailing id.  Binary: little-endian header ``ORSP``, u8 dim, u64
count, then u32 coordinates row-major.  A rectangle is stored as its two
corner points (x1 y1 x2 y2) in both formats.
"""
from __future__ import annotations

import struct

import numpy as np

from ..core import COORD_MAX, ContractError

MAGIC = b"ORSP"
_HEADER = struct.Struct("<4sBQ")


def rects_to_corners(rects) -> np.ndarray:
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    return R[:, [0, 2, 1, 3]]


def corners_to_rects(rows) -> np.ndarray:
    C = np.asarray(rows, dtype=np.int64).reshape(-1, 4)
    return C[:, [0, 2, 1, 3]]


def _check(arr):
    if arr.size and (arr.min() < 0 or arr.max() > COORD_MAX):
        raise ContractError("coordinates must fit in u32")


def write_text(path, arr, ids=None):
    arr = np.asarray(arr, dtype=np.int64)
    _check(arr)
    with open(path, "w") as fh:
        for i, row in enumerate(arr.tolist()):
            line = " ".join(map(str, row))
            if ids is not None:
                line += f" {int(ids[i])}"
            fh.write(line + "\n")


def read_text(path, dim: int):
    """Rows of ``dim`` coordinates; returns (array, ids or None)."""
    rows, ids = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) not in (dim, dim + 1):
                raise ContractError(f"{path}:{lineno}: expected {dim} or {dim + 1} fields, got {len(parts)}")
            try:
                vals = [int(p) for p in parts]
            except ValueError:
                raise ContractError(f"{path}:{lineno}: non-integer field") from None
            rows.append(vals[:dim])
            ids.append(vals[dim] if len(vals) > dim else None)
    arr = np.asarray(rows, dtype=np.int64).reshape(-1, dim)
    _check(arr)
    if any(i is None for i in ids):
        if any(i is not None for i in ids):
            raise ContractError(f"{path}: ids must be given on every line or none")
        return arr, None
    return arr, np.asarray(ids, dtype=np.int64)


def write_bin(path, arr):
    arr = np.asarray(arr, dtype=np.int64)
    _check(arr)
    count, dim = arr.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, dim, count))
        fh.write(arr.astype("<u4").tobytes())


def read_bin(path, dim: int = None):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise ContractError(f"{path}: truncated header")
        magic, fdim, count = _HEADER.unpack(head)
        if magic != MAGIC:
            raise ContractError(f"{path}: bad magic {magic!r}")
        if dim is not None and fdim != dim:
            raise ContractError(f"{path}: file has dim {fdim}, expected {dim}")
        body = fh.read()
    if len(body) != 4 * fdim * count:
        raise ContractError(f"{path}: expected {count} records of dim {fdim}")
    return np.frombuffer(body, dtype="<u4").reshape(count, fdim).astype(np.int64), None


def save(path, arr, fmt: str = "text", ids=None):
    if fmt == "text":
        write_text(path, arr, ids)
    elif fmt == "bin":
        write_bin(path, arr)
    else:
        raise ContractError(f"unknown format {fmt!r}")


def load(path, dim: int, fmt: str = None):
    """Read a point file; the format is sniffed from the magic when not given."""
    if fmt is None:
        with open(path, "rb") as fh:
            fmt = "bin" if fh.read(4) == MAGIC else "text"
    if fmt == "bin":
        return read_bin(path, dim)
    if fmt == "text":
        return read_text(path, dim)
    raise ContractError(f"unknown format {fmt!r}")
