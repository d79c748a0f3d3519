"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers used as bitsets:
bit ``j`` of the integer holds entry ``j``.  Row elimination is therefore a
single XOR per row, and integers of any width behave like a sequence of
machine words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _mask(length: int) -> int:
    return (1 << length) - 1


@dataclass(frozen=True)
class BitVector:
    """Fixed-length vector over GF(2).

    ``bits`` must not carry set bits at or beyond ``length``.
    """

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} exceed length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        if not 0 <= index < length:
            raise IndexError(index)
        return cls(length, 1 << index)

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> BitVector:
        bits = 0
        length = 0
        for j, b in enumerate(values):
            if b not in (0, 1, True, False):
                raise ValueError(f"entry {j} is not a bit: {b!r}")
            if b:
                bits |= 1 << j
            length = j + 1
        return cls(length, bits)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, index: int) -> int:
        if index < 0:
            index += self.length
        if not 0 <= index < self.length:
            raise IndexError(index)
        return (self.bits >> index) & 1

    def __iter__(self):
        return (int((self.bits >> j) & 1) for j in range(self.length))

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits & other.bits)

    def __or__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits | other.bits)

    def dot(self, other: BitVector) -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def any(self) -> bool:
        return self.bits != 0

    def support(self) -> list[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def concat(self, other: BitVector) -> BitVector:
        """``self`` occupies the low indices, ``other`` follows."""
        return BitVector(self.length + other.length, self.bits | (other.bits << self.length))

    def split(self, at: int) -> tuple[BitVector, BitVector]:
        return (BitVector(at, self.bits & _mask(at)),
                BitVector(self.length - at, self.bits >> at))

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


class BitMatrix:
    """Dense GF(2) matrix with row-major bit-packed storage.

    Instances are treated as immutable; the transpose is computed on demand
    and cached so that column access stays cheap.
    """

    __slots__ = ("_rows", "n_rows", "n_cols", "_transpose")

    def __init__(self, rows: Sequence[int], n_cols: int):
        rows = tuple(int(r) for r in rows)
        limit = _mask(n_cols)
        for i, r in enumerate(rows):
            if r < 0 or r & ~limit:
                raise ValueError(f"row {i} has bits beyond column {n_cols}")
        self._rows = rows
        self.n_rows = len(rows)
        self.n_cols = n_cols
        self._transpose: BitMatrix | None = None

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> BitMatrix:
        return cls([0] * n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], n_cols: int | None = None) -> BitMatrix:
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != n_cols:
                raise ValueError("ragged rows")
            packed.append(BitVector.from_iterable(row).bits if n_cols else 0)
        return cls(packed, n_cols)

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        a = np.asarray(array).astype(np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_lists(a.tolist(), a.shape[1])

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], n_cols: int | None = None) -> BitMatrix:
        if n_cols is None:
            if not vectors:
                raise ValueError("cannot infer width of an empty vector list")
            n_cols = vectors[0].length
        for v in vectors:
            if v.length != n_cols:
                raise ValueError("vector length mismatch")
        return cls([v.bits for v in vectors], n_cols)

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.n_cols, self._rows[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.n_cols:
            raise IndexError(j)
        return BitVector(self.n_rows, self.T._rows[j])

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not 0 <= j < self.n_cols:
            raise IndexError(j)
        return (self._rows[i] >> j) & 1

    @property
    def T(self) -> BitMatrix:
        if self._transpose is None:
            cols = [0] * self.n_cols
            for i, r in enumerate(self._rows):
                bit = 1 << i
                while r:
                    low = r & -r
                    cols[low.bit_length() - 1] |= bit
                    r ^= low
            t = BitMatrix(cols, self.n_rows)
            t._transpose = self
            self._transpose = t
        return self._transpose

    def transpose(self) -> BitMatrix:
        return self.T

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        out = []
        b = other._rows
        for r in self._rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= b[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return BitMatrix(out, other.n_cols)

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.n_rows != other.n_rows:
            raise ValueError("row count mismatch")
        s = self.n_cols
        return BitMatrix([a | (b << s) for a, b in zip(self._rows, other._rows)], s + other.n_cols)

    def select_columns(self, columns: Sequence[int]) -> BitMatrix:
        t = self.T._rows
        return BitMatrix([t[j] for j in columns], self.n_rows).T

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self._rows):
            for j in range(self.n_cols):
                out[i, j] = (r >> j) & 1
        return out

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n_cols == other.n_cols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n_cols, self._rows))

    def __repr__(self) -> str:
        return f"BitMatrix({self.n_rows}x{self.n_cols})"

    def __str__(self) -> str:
        return "\n".join(str(self.row(i)) for i in range(self.n_rows))


def eliminate(rows: list[int], columns: Iterable[int]) -> list[int]:
    """Gauss-Jordan elimination of ``rows`` in place.

    Pivots are searched only among ``columns``, in the given order; row
    operations act on the full width.  Pivot rows are moved to the front in
    pivot order.  Returns the pivot columns.
    """
    pivots = []
    r = 0
    n_rows = len(rows)
    for col in columns:
        if r == n_rows:
            break
        bit = 1 << col
        for i in range(r, n_rows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pivot = rows[r]
        for k in range(n_rows):
            if k != r and rows[k] & bit:
                rows[k] ^= pivot
        pivots.append(col)
        r += 1
    return pivots


def rref(m: BitMatrix, columns: Sequence[int] | None = None) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form.

    The pivot is the lowest-index column with a nonzero entry at or below the
    current row, taken from the lowest such row.  ``columns`` optionally
    restricts (and orders) the pivot search.
    """
    rows = list(m.rows)
    pivots = eliminate(rows, range(m.n_cols) if columns is None else columns)
    return BitMatrix(rows, m.n_cols), len(pivots), pivots


def rank(m: BitMatrix) -> int:
    return rref(m)[1]


def null_space_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of ``{u : m u = 0}``, one vector per free column in ascending order."""
    r, _, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.n_cols):
        if f in pivot_set:
            continue
        u = 1 << f
        for k, p in enumerate(pivots):
            if (r.rows[k] >> f) & 1:
                u |= 1 << p
        basis.append(BitVector(m.n_cols, u))
    return basis


def mat_vec(m: BitMatrix, u: BitVector) -> BitVector:
    if u.length != m.n_cols:
        raise ValueError(f"vector length {u.length} does not match {m.n_cols} columns")
    out = 0
    for i, r in enumerate(m.rows):
        if (r & u.bits).bit_count() & 1:
            out |= 1 << i
    return BitVector(m.n_rows, out)


def in_row_space(m: BitMatrix, u: BitVector) -> bool:
    rows = list(m.rows)
    pivots = eliminate(rows, range(m.n_cols))
    x = u.bits
    for k, p in enumerate(pivots):
        if (x >> p) & 1:
            x ^= rows[k]
    return x == 0
