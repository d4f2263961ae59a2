"""Merge sort accelerated by a precomputed block table.

For a fixed input length ``n`` and value range ``{0..k}`` the table maps
every length-``b`` value sequence to its sorted order.  Sorting cuts the
input into ``n / b`` blocks, replaces each block by its table entry, and
then runs only the top ``log2(n / b)`` merge passes.  With the default block
size ``b ~ n / log2 n`` that leaves ``log2 log2 n`` passes.

Table file layout: ``b"SADV1"``, then ``n``, ``k``, ``b`` as little-endian
uint32, then the ``(k+1)**b`` sorted sequences in lexicographic key order,
``b`` bytes each.
"""

from __future__ import annotations

import struct
from collections.abc import Mapping
from dataclasses import dataclass
from itertools import product

from . import kernels
from .parallelize import clog2

__all__ = [
    "SortParams",
    "SortTable",
    "TableError",
    "TableFormatError",
    "DEFAULT_ENTRY_LIMIT",
    "build_table",
    "advice_merge_sort",
    "reference_merge_sort",
    "save_table",
    "load_table",
    "table_bytes",
    "table_from_bytes",
]

MAGIC = b"SADV1"
_HEADER = struct.Struct("<5sIII")
DEFAULT_ENTRY_LIMIT = 2**24


class TableError(ValueError):
    """Resource limit exceeded, or a table that cannot serve a request."""


class TableFormatError(TableError):
    """Malformed or corrupt table file."""


def _is_pow2(v: int) -> bool:
    return v >= 1 and v & (v - 1) == 0


def default_block_size(n: int) -> int:
    b = max(1, n // max(clog2(n), 1))
    # largest power of two <= b; it divides n because n is a power of two
    return 1 << (b.bit_length() - 1)


@dataclass(frozen=True)
class SortParams:
    n: int
    k: int
    b: int | None = None

    def __post_init__(self):
        if not _is_pow2(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if not 0 <= self.k <= 255:
            raise ValueError(f"k must be in 0..255, got {self.k}")
        if self.b is None:
            object.__setattr__(self, "b", default_block_size(self.n))
        if not _is_pow2(self.b) or self.n % self.b:
            raise ValueError(f"block size must be a power of two dividing n, got {self.b}")

    @property
    def g(self) -> int:
        return self.n // self.b

    @property
    def merge_levels(self) -> int:
        return self.g.bit_length() - 1

    @property
    def entries(self) -> int:
        return (self.k + 1) ** self.b


class SortTable(Mapping):
    """Read-only mapping from every length-``b`` key to its sorted sequence.

    Values are stored packed, in lexicographic key order, exactly as in the
    file format.
    """

    def __init__(self, params: SortParams, data: bytes):
        self.params = params
        self.data = bytes(data)

    def index(self, key) -> int:
        base = self.params.k + 1
        idx = 0
        for v in key:
            idx = idx * base + v
        return idx

    def __getitem__(self, key) -> tuple[int, ...]:
        b = self.params.b
        if len(key) != b or any(not 0 <= v <= self.params.k for v in key):
            raise KeyError(key)
        off = self.index(key) * b
        if off + b > len(self.data):
            raise KeyError(key)
        return tuple(self.data[off:off + b])

    def __iter__(self):
        return product(range(self.params.k + 1), repeat=self.params.b)

    def __len__(self) -> int:
        return len(self.data) // self.params.b

    def __eq__(self, other):
        if isinstance(other, SortTable):
            return self.params == other.params and self.data == other.data
        return super().__eq__(other)

    __hash__ = None

    def validate(self) -> None:
        p = self.params
        if len(self.data) != p.b * p.entries:
            raise TableFormatError(
                f"table holds {len(self.data) // p.b} entries, expected {p.entries}"
            )
        for i, key in enumerate(self):
            value = tuple(self.data[i * p.b:(i + 1) * p.b])
            if value != tuple(sorted(key)):
                raise TableFormatError(f"entry {i} ({key} -> {value}) is not the sorted key")


def build_table(params: SortParams, limit: int = DEFAULT_ENTRY_LIMIT) -> SortTable:
    if params.entries > limit:
        raise TableError(
            f"(k+1)^b = {params.entries} entries exceeds the limit {limit}; "
            "pick a smaller b or k"
        )
    data = bytearray()
    for key in product(range(params.k + 1), repeat=params.b):
        data.extend(sorted(key))
    return SortTable(params, bytes(data))


def advice_merge_sort(x, table: SortTable) -> tuple[list[int], int]:
    """Sort ``x`` using the table for the bottom levels; returns (sorted, comparisons)."""
    p = table.params
    if len(x) != p.n:
        raise ValueError(f"input has length {len(x)}, table was built for n={p.n}")
    for v in x:
        if not 0 <= v <= p.k:
            raise ValueError(f"value {v} outside 0..{p.k}")
    out: list[int] = []
    for lo in range(0, p.n, p.b):
        try:
            out.extend(table[tuple(x[lo:lo + p.b])])
        except KeyError:
            raise TableError(f"block at {lo} missing from the table (corrupt table?)") from None
    comparisons = 0
    width = p.b
    for _ in range(p.merge_levels):
        out, c = kernels.merge_pass(out, width)
        comparisons += c
        width *= 2
    if comparisons > p.n * p.merge_levels:
        raise AssertionError(f"{comparisons} comparisons exceeds n * merge_levels")
    return out, comparisons


def reference_merge_sort(x) -> tuple[list[int], int]:
    """Top-down merge sort, split at len // 2; returns (sorted, comparisons)."""
    x = list(x)
    if len(x) <= 1:
        return x, 0
    half = len(x) // 2
    left, cl = reference_merge_sort(x[:half])
    right, cr = reference_merge_sort(x[half:])
    out = []
    i = j = 0
    comparisons = cl + cr
    while i < len(left) and j < len(right):
        comparisons += 1
        if left[i] <= right[j]:
            out.append(left[i])
            i += 1
        else:
            out.append(right[j])
            j += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return out, comparisons


def table_bytes(t: SortTable) -> bytes:
    p = t.params
    return _HEADER.pack(MAGIC, p.n, p.k, p.b) + t.data


def table_from_bytes(raw: bytes) -> SortTable:
    if len(raw) < _HEADER.size:
        raise TableFormatError("file shorter than the header")
    magic, n, k, b = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise TableFormatError(f"bad magic {magic!r}")
    try:
        params = SortParams(n, k, b)
    except ValueError as exc:
        raise TableFormatError(f"bad parameters: {exc}") from None
    table = SortTable(params, raw[_HEADER.size:])
    table.validate()
    return table


def save_table(t: SortTable, path) -> None:
    with open(path, "wb") as fh:
        fh.write(table_bytes(t))


def load_table(path) -> SortTable:
    with open(path, "rb") as fh:
        return table_from_bytes(fh.read())
