"""Sign assignments ("colorings") of the structured Latin square.

A coloring attaches +/-1 to every entry of the square subject to
propagation rules that force each column to be orthogonal to the first
column and each row to the first row, when the symbols 1..n are read as
independent indeterminates.  The free choices live on part of one
column per doubling level; everything else follows by alternating
six-entry cycles, the AB-BA corner relation, and antisymmetry.

Orthogonality of *all* column pairs is then a property to be checked,
not a given: it holds for every coloring at n = 4 and n = 8 and for
none at n = 16.  The check is symbolic over exact integers so the
negative result at n = 16 is bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, SizeError, ValidationError
from .latin import LatinSquare

__all__ = [
    "SignedLatinSquare", "SymbolicGram", "num_free_choices",
    "choices_from_bitstring", "choices_to_bitstring", "color",
    "enumerate_colorings", "symbolic_gram", "is_latin_hadamard",
    "partial_orthogonality_report", "sign_pattern_is_hadamard",
]

EXHAUSTIVE_MAX_W = 4


class SignedLatinSquare:
    """A structured Latin square together with a +/-1 sign for each entry.

    The signed entry H[i,j] = signs[i,j] * S[i,j] carries both pieces;
    |H| is always the underlying square.  First row and first column are
    positive and the diagonal below row one is negative, as produced by
    the coloring procedure.
    """

    __slots__ = ("square", "signs", "choices")

    def __init__(self, square: LatinSquare, signs: np.ndarray,
                 choices: tuple[int, ...] | None = None):
        n = square.n
        sgn = np.asarray(signs, dtype=np.int64)
        if sgn.shape != (n, n):
            raise ValidationError(f"sign matrix must be {n}x{n}, got {sgn.shape}")
        if not np.isin(sgn, (-1, 1)).all():
            raise ValidationError("sign matrix entries must be +1 or -1")
        if not (sgn[0] == 1).all() or not (sgn[:, 0] == 1).all():
            raise ValidationError("first row and first column must be positive")
        if n > 1 and not (np.diag(sgn)[1:] == -1).all():
            raise ValidationError("diagonal entries below row one must be negative")
        sgn = sgn.copy()
        sgn.setflags(write=False)
        self.square = square
        self.signs = sgn
        self.choices = None if choices is None else tuple(int(c) for c in choices)

    @property
    def n(self) -> int:
        return self.square.n

    @property
    def w(self) -> int:
        return self.square.w

    def signed_entries(self) -> np.ndarray:
        """The matrix of signed symbols, entries in {-n..-1, 1..n}."""
        return self.signs * self.square.entries

    def to_tuple(self) -> tuple[tuple[int, ...], ...]:
        """Canonical row-major serialization; defines matrix identity."""
        return tuple(tuple(int(v) for v in row) for row in self.signed_entries())

    @classmethod
    def from_signed_entries(cls, entries) -> "SignedLatinSquare":
        """Rebuild from a matrix of signed symbols."""
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("signed matrix must be square")
        n = arr.shape[0]
        w = int(n).bit_length() - 1
        if 2 ** w != n:
            raise ValidationError(f"dimension must be a power of two, got {n}")
        magnitude = np.abs(arr)
        square = LatinSquare(w, magnitude)
        return cls(square, np.sign(arr))

    def __eq__(self, other) -> bool:
        return (isinstance(other, SignedLatinSquare)
                and self.to_tuple() == other.to_tuple())

    def __hash__(self) -> int:
        return hash(self.to_tuple())

    def __repr__(self) -> str:
        return f"SignedLatinSquare(w={self.w}, choices={self.choices})"


@dataclass(frozen=True)
class SymbolicGram:
    """Exact monomial coefficients of all pairwise column dot products.

    coefficients maps ((j, j'), (a, b)) -> integer coefficient of the
    monomial x_a * x_b in the dot product of columns j <= j' (1-based).
    Only nonzero coefficients are stored.
    """

    n: int
    coefficients: dict

    def coefficient(self, column_pair, value_pair) -> int:
        j, jp = sorted(column_pair)
        a, b = sorted(value_pair)
        return self.coefficients.get(((j, jp), (a, b)), 0)

    def off_diagonal_zero(self) -> bool:
        return all(j == jp for ((j, jp), _pair) in self.coefficients)


def num_free_choices(w: int) -> int:
    """Number of free sign choices when coloring the 2**w square."""
    return 2 ** w - (w + 1)


def choices_from_bitstring(bits: str) -> tuple[int, ...]:
    """Map '0'/'1' characters to +1/-1 choices, leftmost bit first."""
    if not set(bits) <= {"0", "1"}:
        raise ValidationError(f"choice bitstring must be binary, got {bits!r}")
    return tuple(1 if b == "0" else -1 for b in bits)


def choices_to_bitstring(choices) -> str:
    return "".join("0" if c == 1 else "1" for c in choices)


def _assign(signs: np.ndarray, i: int, j: int, value: int) -> None:
    current = signs[i, j]
    if current == 0:
        signs[i, j] = value
    elif current != value:
        raise InternalConsistencyError(
            f"sign propagation conflict at entry ({i + 1}, {j + 1})")


def color(square: LatinSquare, choices) -> SignedLatinSquare:
    """Color the square from a vector of free +/-1 choices.

    Choices are consumed level by level (doubling level 2 upward), then
    by increasing row index within the level.  Each choice colors one
    entry of the new block column and propagates around its six-entry
    alternating cycle; the remaining blocks follow from AB-BA corners
    and antisymmetry.  Any conflicting assignment raises
    InternalConsistencyError (it would indicate a construction bug, not
    bad input).
    """
    w, n = square.w, square.n
    choices = tuple(int(c) for c in choices)
    expected = num_free_choices(w)
    if len(choices) != expected:
        raise ValidationError(
            f"need exactly {expected} choices for w={w}, got {len(choices)}")
    if not all(c in (-1, 1) for c in choices):
        raise ValidationError("choices must be +1 or -1")

    S = square.entries
    signs = np.zeros((n, n), dtype=np.int64)
    signs[0, :] = 1
    signs[:, 0] = 1
    for i in range(1, n):
        signs[i, i] = -1

    pos = 0
    for level in range(2, w + 1):
        h = 2 ** (level - 1)
        # Free choices sit at (row i, column h) for i = 1..h-1 (0-based);
        # each propagates around its alternating six-entry cycle.
        for i in range(1, h):
            c = choices[pos]
            pos += 1
            _assign(signs, i, h, c)
            _assign(signs, i, h + i, -c)
            _assign(signs, h, h + i, c)
            _assign(signs, h, i, -c)
            _assign(signs, h + i, i, c)
            _assign(signs, h + i, h, -c)

        # Lower-left block: complete each uncolored entry from the AB-BA
        # quad through column h, whose three other corners are colored.
        partner_row = {int(S[r, h]): r for r in range(h)}
        for i in range(h):
            r = h + i
            for j in range(1, h):
                if signs[r, j] != 0:
                    continue
                ip = partner_row[int(S[r, j])]
                if S[ip, j] != S[r, h]:
                    raise InternalConsistencyError(
                        "AB-BA value pattern broken in lower-left fill")
                _assign(signs, r, j, -signs[ip, j] * signs[ip, h] * signs[r, h])

        # Upper-right block: antisymmetric to the lower-left block.
        for i in range(1, h):
            for j in range(1, h):
                _assign(signs, i, h + j, -signs[h + j, i])

        # Lower-right block: AB-BA quads against the two filled blocks.
        for i in range(1, h):
            r = h + i
            for j in range(1, h):
                cpos = h + j
                if signs[r, cpos] != 0:
                    continue
                _assign(signs, r, cpos,
                        -signs[i, j] * signs[i, cpos] * signs[r, j])

    if (signs == 0).any():
        raise InternalConsistencyError("coloring left uncolored entries")
    return SignedLatinSquare(square, signs, choices=choices)


def enumerate_colorings(square: LatinSquare):
    """Yield all 2**(2**w - (w+1)) colorings in bitstring order.

    Candidate index c maps to the bitstring format(c, '0{b}b') with
    '0' = '+' and '1' = '-', leftmost bit consumed first, so candidate
    order is reproducible.
    """
    if square.w > EXHAUSTIVE_MAX_W:
        raise SizeError(
            f"exhaustive enumeration is limited to w <= {EXHAUSTIVE_MAX_W} "
            f"({2 ** num_free_choices(EXHAUSTIVE_MAX_W)} candidates); got w={square.w}")
    b = num_free_choices(square.w)
    for idx in range(2 ** b):
        bits = format(idx, f"0{b}b") if b else ""
        yield color(square, choices_from_bitstring(bits))


def _pair_coefficients(values_a, values_b, sign_products, n) -> np.ndarray:
    """Exact integer coefficients of x_a*x_b monomials for one dot product."""
    acc = np.zeros((n + 1, n + 1), dtype=np.int64)
    lo = np.minimum(values_a, values_b)
    hi = np.maximum(values_a, values_b)
    np.add.at(acc, (lo, hi), sign_products)
    return acc


def symbolic_gram(H: SignedLatinSquare, rows: bool = False) -> SymbolicGram:
    """Full symbolic Gram over the columns (or rows) of H.

    Every dot product is expanded into monomials x_a*x_b with integer
    coefficients; no floating point is involved, so a zero here is a
    proof of orthogonality for every substitution of the symbols.
    """
    S, G = H.square.entries, H.signs
    if rows:
        S, G = S.T, G.T
    n = H.n
    coefficients = {}
    for j in range(n):
        for jp in range(j, n):
            acc = _pair_coefficients(S[:, j], S[:, jp], G[:, j] * G[:, jp], n)
            for a, b in zip(*np.nonzero(acc)):
                coefficients[((j + 1, jp + 1), (int(a), int(b)))] = int(acc[a, b])
    return SymbolicGram(n=n, coefficients=coefficients)


def _all_pairs_orthogonal(S: np.ndarray, G: np.ndarray, n: int) -> bool:
    for j in range(n):
        for jp in range(j + 1, n):
            acc = _pair_coefficients(S[:, j], S[:, jp], G[:, j] * G[:, jp], n)
            if acc.any():
                return False
    return True


def is_latin_hadamard(H: SignedLatinSquare) -> bool:
    """True iff all columns and all rows are symbolically orthogonal."""
    S, G = H.square.entries, H.signs
    return (_all_pairs_orthogonal(S, G, H.n)
            and _all_pairs_orthogonal(S.T, G.T, H.n))


def partial_orthogonality_report(H: SignedLatinSquare) -> set:
    """Unordered 1-based column pairs whose symbolic dot product vanishes."""
    S, G = H.square.entries, H.signs
    n = H.n
    orthogonal = set()
    for j in range(n):
        for jp in range(j + 1, n):
            acc = _pair_coefficients(S[:, j], S[:, jp], G[:, j] * G[:, jp], n)
            if not acc.any():
                orthogonal.add((j + 1, jp + 1))
    return orthogonal


def sign_pattern_is_hadamard(H) -> bool:
    """True iff the bare sign matrix has pairwise orthogonal rows.

    Accepts a SignedLatinSquare or any square +/-1 array.
    """
    G = H.signs if isinstance(H, SignedLatinSquare) else np.asarray(H, dtype=np.int64)
    n = G.shape[0]
    if G.shape != (n, n) or not np.isin(G, (-1, 1)).all():
        raise ValidationError("expected a square matrix of +1/-1 signs")
    return bool(np.array_equal(G @ G.T, n * np.eye(n, dtype=np.int64)))
