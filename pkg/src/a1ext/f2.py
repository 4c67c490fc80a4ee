"""Exact linear algebra over F2 with bit-packed rows.

Rows are Python ints used as bitsets (bit j = entry in column j), so a row
operation is a single XOR no matter how many columns the matrix has.
Vectors are ints with the same convention.  Pivoting always picks the lowest
available column index, which keeps every downstream basis choice
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple


@dataclass
class F2Matrix:
    """Dense matrix over F2; ``rows[i]`` is the bitset of row i."""

    nrows: int
    ncols: int
    rows: List[int]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        mask = (1 << self.ncols) - 1
        for r in self.rows:
            if r & ~mask:
                raise ValueError("row has bits outside column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "F2Matrix":
        """Build from an iterable of 0/1 iterables."""
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            packed.append(sum((1 << j) for j, v in enumerate(r) if v & 1))
        return cls(len(rows), ncols, packed)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, [0] * nrows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    def copy(self) -> "F2Matrix":
        return F2Matrix(self.nrows, self.ncols, list(self.rows))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return F2Matrix(self.ncols, self.nrows, cols)

    def apply(self, v: int) -> int:
        """Matrix times column vector (vector = bitset over source columns)."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        """self @ other, so (self.matmul(other)).apply(v) == self.apply(other.apply(v))."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        # row i of the product = XOR of other's rows selected by row i of self
        out = []
        for r in self.rows:
            acc = 0
            while r:
                k = (r & -r).bit_length() - 1
                acc ^= other.rows[k]
                r &= r - 1
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def stack(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in stack")
        return F2Matrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def rank(self) -> int:
        return rref(self)[0]


def rref(m: F2Matrix) -> Tuple[int, List[int], F2Matrix]:
    """Reduced row-echelon form.

    Returns (rank, pivot column indices, reduced matrix).  Pivots are chosen
    at the lowest column index first; the reduced matrix has each pivot
    column cleared above and below its pivot.
    """
    work = list(m.rows)
    pivots: List[int] = []
    pivot_row = 0
    for col in range(m.ncols):
        found = -1
        bit = 1 << col
        for r in range(pivot_row, m.nrows):
            if work[r] & bit:
                found = r
                break
        if found < 0:
            continue
        work[pivot_row], work[found] = work[found], work[pivot_row]
        for r in range(m.nrows):
            if r != pivot_row and (work[r] & bit):
                work[r] ^= work[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == m.nrows:
            break
    return len(pivots), pivots, F2Matrix(m.nrows, m.ncols, work)


def kernel_basis(m: F2Matrix) -> List[int]:
    """Basis of {v : m.apply(v) == 0}, as column bitsets.

    One vector per free column, in increasing free-column order (so the list
    is deterministic and its length is ncols - rank).
    """
    rank, pivots, red = rref(m)
    pivot_set = set(pivots)
    basis: List[int] = []
    for col in range(m.ncols):
        if col in pivot_set:
            continue
        v = 1 << col
        bit = 1 << col
        for i, pcol in enumerate(pivots):
            if red.rows[i] & bit:
                v |= 1 << pcol
        basis.append(v)
    return basis


def solve(m: F2Matrix, b: int) -> Optional[int]:
    """Some x with m.apply(x) == b, or None if the system is inconsistent.

    ``b`` is a bitset over row indices and must fit in m.nrows bits.
    """
    if b >> m.nrows:
        raise ValueError("right-hand side longer than row count")
    # eliminate on the augmented matrix [m | b]
    aug = F2Matrix(
        m.nrows, m.ncols + 1,
        [m.rows[i] | (((b >> i) & 1) << m.ncols) for i in range(m.nrows)],
    )
    rank, pivots, red = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = 0
    for i, pcol in enumerate(pivots):
        if (red.rows[i] >> m.ncols) & 1:
            x |= 1 << pcol
    return x


def vector_from_bits(bits: Iterable[int]) -> int:
    return sum(1 << j for j, v in enumerate(bits) if v & 1)


def vector_to_bits(v: int, n: int) -> List[int]:
    return [(v >> j) & 1 for j in range(n)]


class Subspace:
    """Incrementally built subspace of F2^n, kept in reduced echelon form.

    Single-writer: build it up with :meth:`add`, share freely once done.
    """

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.rows: List[int] = []       # echelonized, sorted by pivot
        self.pivots: List[int] = []

    def reduce(self, v: int) -> int:
        """Reduce v against the subspace; 0 means v is contained in it."""
        for r, p in zip(self.rows, self.pivots):
            if (v >> p) & 1:
                v ^= r
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Add v to the span; returns True if the dimension grew."""
        v = self.reduce(v)
        if v == 0:
            return False
        p = (v & -v).bit_length() - 1
        # clear column p from existing rows to stay fully reduced
        for i in range(len(self.rows)):
            if (self.rows[i] >> p) & 1:
                self.rows[i] ^= v
        idx = 0
        while idx < len(self.pivots) and self.pivots[idx] < p:
            idx += 1
        self.rows.insert(idx, v)
        self.pivots.insert(idx, p)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)
