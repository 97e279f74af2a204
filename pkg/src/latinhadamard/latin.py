"""Structured power-of-two Latin squares with the AB-BA corner property.

The square of dimension 2**w is built by block doubling: the upper-left
half repeats in the lower-right, and the off-diagonal blocks are the
upper-left block shifted by 2**(w-1).  Every row and column is a
permutation of 1..n, the matrix is symmetric, and for any two entries
a, b sitting in one row there is exactly one other row holding b, a in
the same pair of columns (the AB-BA property).  That cancellation
structure is what later makes signed versions orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, ValidationError

__all__ = ["LatinSquare", "CornerQuad", "construct_latin_square",
           "find_abba_partner", "enumerate_abba_quads"]


class LatinSquare:
    """Immutable n x n integer matrix, n = 2**w, entries in 1..n.

    Indexing through :meth:`entry` is 1-based to match the usual
    combinatorial convention; ``entries`` exposes the raw 0-based array.
    """

    __slots__ = ("w", "n", "entries")

    def __init__(self, w: int, entries: np.ndarray):
        self.w = int(w)
        self.n = 2 ** self.w
        arr = np.asarray(entries, dtype=np.int64)
        if arr.shape != (self.n, self.n):
            raise ValidationError(
                f"expected a {self.n}x{self.n} matrix for w={w}, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.entries = arr

    def entry(self, i: int, j: int) -> int:
        """Entry at 1-based position (i, j)."""
        return int(self.entries[i - 1, j - 1])

    def row(self, i: int) -> np.ndarray:
        return self.entries[i - 1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j - 1]

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatinSquare) and self.w == other.w
                and bool(np.array_equal(self.entries, other.entries)))

    def __hash__(self) -> int:
        return hash((self.w, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"LatinSquare(w={self.w}, n={self.n})"


@dataclass(frozen=True)
class CornerQuad:
    """Four entries S[i1,j1]=S[i2,j2]=a and S[i1,j2]=S[i2,j1]=b (1-based)."""

    i1: int
    j1: int
    i2: int
    j2: int
    a: int
    b: int


def construct_latin_square(w: int) -> LatinSquare:
    """Build the canonical block-recursive Latin square of dimension 2**w.

    Base case is the 1x1 matrix [[1]]; each doubling step places the
    previous square on the diagonal blocks and its shift by 2**(w-1) on
    the off-diagonal blocks.
    """
    if w < 0 or int(w) != w:
        raise ValidationError(f"dimension exponent must be a non-negative integer, got {w!r}")
    w = int(w)
    block = np.array([[1]], dtype=np.int64)
    for level in range(1, w + 1):
        half = 2 ** (level - 1)
        shifted = block + half
        block = np.block([[block, shifted], [shifted, block]])
    return LatinSquare(w, block)


def find_abba_partner(square: LatinSquare, i1: int, j1: int, j2: int) -> CornerQuad:
    """Complete the AB-BA quad through row i1 and columns j1 != j2.

    The partner row i2 is the unique row holding b = S[i1,j2] in column
    j1; the Latin property guarantees existence and uniqueness, and the
    AB-BA property guarantees S[i2,j2] == S[i1,j1].
    """
    if j1 == j2:
        raise ValidationError("column indices must differ")
    a = square.entry(i1, j1)
    b = square.entry(i1, j2)
    col = square.column(j1)
    i2 = int(np.nonzero(col == b)[0][0]) + 1
    if i2 == i1 or square.entry(i2, j2) != a:
        raise InternalConsistencyError(
            f"AB-BA partner missing for (i1={i1}, j1={j1}, j2={j2}); "
            "the square does not have the corner property")
    return CornerQuad(i1=i1, j1=j1, i2=i2, j2=j2, a=a, b=b)


def enumerate_abba_quads(square: LatinSquare):
    """Yield every unordered AB-BA quad exactly once.

    For each unordered column pair the rows split into n/2 disjoint
    quads, so the total count is C(n,2) * n/2.
    """
    n = square.n
    for j1 in range(1, n + 1):
        for j2 in range(j1 + 1, n + 1):
            for i1 in range(1, n + 1):
                quad = find_abba_partner(square, i1, j1, j2)
                if quad.i2 > i1:
                    yield quad
