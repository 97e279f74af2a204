"""Doubling algebras, zero-divisor scanning, and Radon's function.

Each algebra is given by its basis multiplication table: e_i * e_j is a
signed basis element.  Tables come either from the classical doubling
construction (complex numbers, quaternions, octonions, sedenions, ...)
or from a signed Latin square, whose entries are read directly as the
signed products.  Zero divisors of the form (e_i +/- e_j), which for
dimension up to 16 are the only kind, are found by exact expansion of
the bilinear product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coloring import SignedLatinSquare
from .errors import ValidationError

__all__ = ["AlgebraTable", "ZeroDivisorPair", "cayley_dickson_table",
           "table_from_signed_square", "find_zero_divisors", "radon"]


class AlgebraTable:
    """Basis multiplication table: e_i * e_j = signs[i,j] * e_{indices[i,j]}.

    1-based basis labels; e_1 is the unit and every other basis element
    squares to -e_1.  The unsigned table is a Latin square.
    """

    __slots__ = ("dim", "signs", "indices")

    def __init__(self, signs: np.ndarray, indices: np.ndarray):
        signs = np.asarray(signs, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        dim = signs.shape[0]
        if signs.shape != (dim, dim) or indices.shape != (dim, dim):
            raise ValidationError("sign and index tables must be square and congruent")
        if not np.isin(signs, (-1, 1)).all():
            raise ValidationError("table signs must be +1 or -1")
        symbols = np.arange(1, dim + 1)
        for axis in (0, 1):
            if not (np.sort(indices, axis=axis) == (symbols[:, None] if axis == 0
                                                    else symbols[None, :])).all():
                raise ValidationError("unsigned table must be a Latin square")
        if not ((indices[0] == symbols).all() and (signs[0] == 1).all()
                and (indices[:, 0] == symbols).all() and (signs[:, 0] == 1).all()):
            raise ValidationError("e_1 must act as a two-sided unit")
        if dim > 1 and not ((np.diag(indices)[1:] == 1).all()
                            and (np.diag(signs)[1:] == -1).all()):
            raise ValidationError("non-unit basis elements must square to -e_1")
        signs = signs.copy()
        indices = indices.copy()
        signs.setflags(write=False)
        indices.setflags(write=False)
        self.dim = dim
        self.signs = signs
        self.indices = indices

    def basis_product(self, i: int, j: int) -> tuple[int, int]:
        """e_i * e_j as (sign, basis index), 1-based."""
        return int(self.signs[i - 1, j - 1]), int(self.indices[i - 1, j - 1])

    def multiply(self, a, b) -> np.ndarray:
        """Bilinear product of integer coefficient vectors, exact."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape != (self.dim,) or b.shape != (self.dim,):
            raise ValidationError(f"coefficient vectors must have length {self.dim}")
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(a)[0]:
            for j in np.nonzero(b)[0]:
                out[self.indices[i, j] - 1] += a[i] * b[j] * self.signs[i, j]
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraTable)
                and np.array_equal(self.signs, other.signs)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.signs.tobytes(), self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"AlgebraTable(dim={self.dim})"


@dataclass(frozen=True)
class ZeroDivisorPair:
    """(e_i + s1*e_j)(e_k + s2*e_l) = 0, all indices >= 2, 1-based."""

    i: int
    j: int
    s1: int
    k: int
    l: int
    s2: int

    def __str__(self) -> str:
        left = "+" if self.s1 > 0 else "-"
        right = "+" if self.s2 > 0 else "-"
        return (f"(e_{self.i} {left} e_{self.j})"
                f"(e_{self.k} {right} e_{self.l}) = 0")


def cayley_dickson_table(m: int) -> AlgebraTable:
    """Multiplication table of the 2**m-dimensional doubling algebra.

    Doubling rule on pairs: (a, b)(c, d) = (a c - conj(d) b, d a + b conj(c)),
    with conjugation negating every non-unit coordinate.  This sign
    convention reproduces the usual quaternion relations ij = k, ji = -k.
    """
    if m < 0 or int(m) != m:
        raise ValidationError(f"dimension exponent must be a non-negative integer, got {m!r}")
    if m > 5:
        raise ValidationError("tables above dimension 32 are not supported")
    signs = np.array([[1]], dtype=np.int64)
    indices = np.array([[1]], dtype=np.int64)
    for _ in range(int(m)):
        h = signs.shape[0]
        conj = np.full(h, -1, dtype=np.int64)
        conj[0] = 1
        # Quadrants, left factor by row, right factor by column:
        #   (a,0)(c,0) = (ac, 0)      (a,0)(0,d) = (0, da)
        #   (0,b)(c,0) = (0, b conj(c))   (0,b)(0,d) = (-conj(d) b, 0)
        signs = np.block([
            [signs, signs.T],
            [signs * conj[None, :], -(signs.T * conj[None, :])],
        ])
        indices = np.block([
            [indices, indices.T + h],
            [indices + h, indices.T],
        ])
    return AlgebraTable(signs, indices)


def table_from_signed_square(H: SignedLatinSquare) -> AlgebraTable:
    """Read a signed Latin square as a basis multiplication table."""
    if not (H.signs[0] == 1).all() or not (H.signs[:, 0] == 1).all():
        raise ValidationError("first row and column of the coloring must be positive")
    return AlgebraTable(H.signs, H.square.entries)


def find_zero_divisors(table: AlgebraTable):
    """Yield all zero divisors of the form (e_i +/- e_j)(e_k +/- e_l).

    Indices run over 2 <= i < j and 2 <= k < l; every emitted pair is
    verified by exact expansion of the four signed basis products.  The
    scan skips (k, l) whose unsigned products cannot collide with those
    of (i, j): in a Latin table the four terms can only cancel crosswise
    (same row or same column forces distinct products), so nothing is
    missed.  For dimension <= 16 this sum-of-two form is the only shape
    a zero divisor can take; at dimension 32 the scan still only covers
    this form.
    """
    n = table.dim
    G = table.signs
    X = table.indices
    # row_position[r][v] = 0-based column where value v appears in row r
    row_position = [
        {int(X[r, c]): c for c in range(n)} for r in range(n)
    ]
    for i in range(1, n):
        for j in range(i + 1, n):
            for k in range(1, n):
                l = row_position[j][int(X[i, k])]
                if l <= k or l == 0 or X[i, l] != X[j, k]:
                    continue
                for s1 in (1, -1):
                    for s2 in (1, -1):
                        acc = np.zeros(n, dtype=np.int64)
                        acc[X[i, k] - 1] += G[i, k]
                        acc[X[i, l] - 1] += s2 * G[i, l]
                        acc[X[j, k] - 1] += s1 * G[j, k]
                        acc[X[j, l] - 1] += s1 * s2 * G[j, l]
                        if not acc.any():
                            yield ZeroDivisorPair(i=i + 1, j=j + 1, s1=s1,
                                                  k=k + 1, l=l + 1, s2=s2)


def radon(n: int) -> int:
    """Radon's function: for n = 2**(4c+d) * odd, 0 <= d < 4, returns 8c + 2**d."""
    if n < 1 or int(n) != n:
        raise ValidationError(f"argument must be a positive integer, got {n!r}")
    n = int(n)
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    c, d = divmod(a, 4)
    return 8 * c + 2 ** d
