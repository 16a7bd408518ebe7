"""Binary table cache: ``b"LDA1"``, little-endian u64 ``n``, then the rows as
little-endian u32 1-based values.  A cache only ever accelerates loading; a
loaded table is compared against a fresh build unless ``verify=False``."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .table import LaverTable, LaverError

MAGIC = b"LDA1"


class CacheMismatch(LaverError):
    pass


def save_table(t: LaverTable, path) -> None:
    arr = t.array0().astype("<u4") + 1
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", t.n))
        fh.write(arr.tobytes())


def load_table(path, *, verify: bool = True) -> LaverTable:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise CacheMismatch(f"{path}: bad magic {data[:4]!r}")
    (n,) = struct.unpack("<Q", data[4:12])
    N = 1 << n
    body = np.frombuffer(data, dtype="<u4", offset=12)
    if body.size != N * N:
        raise CacheMismatch(f"{path}: expected {N * N} entries, found {body.size}")
    t = LaverTable.from_rows(body.reshape(N, N))
    if verify:
        fresh = LaverTable(n)
        if not np.array_equal(fresh.array0(), t.array0()):
            raise CacheMismatch(f"{path}: cached A_{n} differs from a rebuild")
    return t
