"""Bit-packed binary matrices over F2.

Each row is stored as a Python int.  Column ``j`` of a row with ``cols``
columns lives at bit ``cols - 1 - j``, so ``int("0110", 2)`` is the row
``[0, 1, 1, 0]``.  The same most-significant-first convention is used for
every bit vector in the package (codewords, measured strings, statevector
indices).
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np


def parity(x: int) -> int:
    return x.bit_count() & 1


def bits_to_int(bits: str | Sequence[int]) -> int:
    if isinstance(bits, str):
        if bits and set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return int(bits, 2) if bits else 0
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"entries must be 0/1, got {b!r}")
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


class BitMatrix:
    """Immutable ``rows x cols`` matrix over F2 with bit-packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Iterable[int]):
        data = tuple(int(r) for r in data)
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        limit = 1 << cols
        for r in data:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {cols} columns")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]] | Sequence[str]) -> BitMatrix:
        rows = list(rows)
        if not rows:
            raise ValueError("empty matrix")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (bits_to_int(r) for r in rows))

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        a = np.asarray(array)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0/1")
        return cls.from_rows(a.astype(int).tolist())

    @classmethod
    def identity(cls, size: int) -> BitMatrix:
        return cls(size, size, (1 << (size - 1 - i) for i in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, [0] * rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            for j in range(self.cols):
                out[i, j] = (r >> (self.cols - 1 - j)) & 1
        return out

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return (self.data[i] >> (self.cols - 1 - j)) & 1

    def row(self, i: int) -> int:
        return self.data[i]

    def col(self, j: int) -> int:
        """Column ``j`` packed with row 0 as the most significant bit."""
        shift = self.cols - 1 - j
        value = 0
        for r in self.data:
            value = (value << 1) | ((r >> shift) & 1)
        return value

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, (self.col(j) for j in range(self.cols)))

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return BitMatrix(
            self.rows,
            self.cols + other.cols,
            ((a << other.cols) | b for a, b in zip(self.data, other.data)),
        )

    def submatrix(self, col_start: int, col_stop: int) -> BitMatrix:
        width = col_stop - col_start
        shift = self.cols - col_stop
        mask = (1 << width) - 1
        return BitMatrix(self.rows, width, ((r >> shift) & mask for r in self.data))

    def vecmul(self, x: int) -> int:
        """Row vector times matrix: ``x`` has ``rows`` bits, result ``cols`` bits."""
        out = 0
        for i, r in enumerate(self.data):
            if (x >> (self.rows - 1 - i)) & 1:
                out ^= r
        return out

    def mulvec(self, v: int) -> int:
        """Matrix times column vector: ``v`` has ``cols`` bits, result ``rows`` bits."""
        out = 0
        for r in self.data:
            out = (out << 1) | parity(r & v)
        return out

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return BitMatrix(self.rows, other.cols, (other.vecmul(r) for r in self.data))

    def popcount(self) -> int:
        return sum(r.bit_count() for r in self.data)

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(int_to_bits(r, self.cols) for r in self.data)
        return f"BitMatrix({self.rows}x{self.cols}: {body})"
