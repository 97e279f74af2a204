"""Exact partition of the Pearson statistic into one-degree components.

The multinomial covariance D(p) - pp' is not idempotent unless all
cells are equiprobable, but its diagonal rescaling Sigma* is, with the
square-root-probability vector spanning the kernel.  Any orthonormal
matrix whose first column is that vector therefore diagonalizes
Sigma*, and projecting the scaled residuals onto its remaining columns
splits the Pearson statistic into an exact sum of squares -- a
finite-sample identity, not an asymptotic one.  Signed Latin squares
supply such matrices symbolically for 2, 4 and 8 cells; Hadamard sign
matrices cover the equiprobable case at any power of two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coloring import SignedLatinSquare, is_latin_hadamard
from .errors import InternalConsistencyError, ValidationError
from .latin import construct_latin_square

__all__ = [
    "ProbabilityVector", "CellCounts", "Eigenbasis", "Decomposition",
    "pearson_x2", "scaled_residuals", "sigma", "sigma_star",
    "eigenbasis_from_latin_hadamard", "eigenbasis_from_sign_matrix",
    "decompose", "component_formulas_t2_t6_t8", "jacobi_eigenvalues",
    "eigen_interlacing_check", "sylvester_hadamard",
    "canonical_signed_square_8", "alternate_signed_square_8",
]

PROBABILITY_SUM_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-12
PARTITION_REL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Fully specified cell probabilities: strictly positive, summing to one."""

    p: np.ndarray

    def __init__(self, p):
        arr = np.asarray(p, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("need a flat vector of at least two probabilities")
        if not (arr > 0).all():
            raise ValidationError("all cell probabilities must be strictly positive")
        if abs(arr.sum() - 1.0) > PROBABILITY_SUM_TOL:
            raise ValidationError(
                f"probabilities must sum to 1 (got {arr.sum()!r})")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @classmethod
    def proportional_to(cls, weights) -> "ProbabilityVector":
        arr = np.asarray(weights, dtype=float)
        total = arr.sum()
        if total <= 0:
            raise ValidationError("weights must have a positive sum")
        return cls(arr / total)

    @classmethod
    def equiprobable(cls, k: int) -> "ProbabilityVector":
        return cls(np.full(k, 1.0 / k))

    @property
    def k(self) -> int:
        return self.p.size

    def sqrt(self) -> np.ndarray:
        return np.sqrt(self.p)


@dataclass(frozen=True, eq=False)
class CellCounts:
    """Observed multinomial cell frequencies."""

    m: np.ndarray
    n: int = field(init=False)

    def __init__(self, m):
        arr = np.asarray(m)
        if arr.ndim != 1:
            raise ValidationError("counts must be a flat vector")
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.array_equal(rounded, arr):
                raise ValidationError("counts must be integers")
            arr = rounded
        arr = arr.astype(np.int64)
        if (arr < 0).any():
            raise ValidationError("counts must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)
        object.__setattr__(self, "n", int(arr.sum()))

    @property
    def k(self) -> int:
        return self.m.size


class Eigenbasis:
    """Orthonormal k x k matrix whose first column is sqrt(p).

    Columns 2..k are then automatically unit eigenvectors of the scaled
    covariance Sigma*, so projecting scaled residuals onto them yields
    the component statistics.  Orthonormality and the first column are
    validated on construction.
    """

    __slots__ = ("matrix", "p")

    def __init__(self, matrix: np.ndarray, p: ProbabilityVector,
                 tol: float = ORTHONORMALITY_TOL):
        O = np.asarray(matrix, dtype=float)
        k = p.k
        if O.shape != (k, k):
            raise ValidationError(f"matrix must be {k}x{k}, got {O.shape}")
        gram_err = np.abs(O.T @ O - np.eye(k)).max()
        if gram_err > tol:
            raise ValidationError(
                f"columns are not orthonormal (max Gram deviation {gram_err:.2e})")
        col_err = np.abs(O[:, 0] - p.sqrt()).max()
        if col_err > tol:
            raise ValidationError(
                f"first column must be sqrt(p) (max deviation {col_err:.2e})")
        O = O.copy()
        O.setflags(write=False)
        self.matrix = O
        self.p = p

    @property
    def k(self) -> int:
        return self.p.k

    def component_vectors(self) -> np.ndarray:
        """Columns 2..k as a k x (k-1) array."""
        return self.matrix[:, 1:]


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Signed components T_2..T_k whose squares sum exactly to X^2."""

    components: np.ndarray
    x2: float
    y: np.ndarray

    @property
    def sum_check(self) -> float:
        """X^2 minus the component sum of squares (should be ~0)."""
        return self.x2 - float(np.square(self.components).sum())


def _check_dims(m: CellCounts, p: ProbabilityVector) -> None:
    if m.k != p.k:
        raise ValidationError(f"counts have {m.k} cells but probabilities have {p.k}")


def pearson_x2(m: CellCounts, p: ProbabilityVector) -> float:
    """Sum of (observed - expected)^2 / expected over all cells."""
    _check_dims(m, p)
    expected = m.n * p.p
    return float((np.square(m.m - expected) / expected).sum())


def scaled_residuals(m: CellCounts, p: ProbabilityVector) -> np.ndarray:
    """y_i = (m_i - n p_i) / sqrt(n p_i); satisfies y'y = X^2."""
    _check_dims(m, p)
    if m.n < 1:
        raise ValidationError("need at least one observation")
    expected = m.n * p.p
    return (m.m - expected) / np.sqrt(expected)


def sigma(p: ProbabilityVector) -> np.ndarray:
    """Multinomial covariance D(p) - pp' (singular, rank k-1)."""
    return np.diag(p.p) - np.outer(p.p, p.p)


def sigma_star(p: ProbabilityVector) -> np.ndarray:
    """Diagonal rescaling D^{-1/2} Sigma D^{-1/2}; idempotent with
    kernel spanned by sqrt(p)."""
    d = 1.0 / np.sqrt(p.p)
    return sigma(p) * np.outer(d, d)


def eigenbasis_from_latin_hadamard(H: SignedLatinSquare,
                                   p: ProbabilityVector) -> Eigenbasis:
    """O[i,j] = sign(H[i,j]) * sqrt(p_s) with s = |H[i,j]|.

    Requires H to be a Latin-Hadamard matrix (all columns and rows
    symbolically orthogonal); that is exactly what makes O orthonormal
    for every probability vector.
    """
    if p.k != H.n:
        raise ValidationError(f"matrix order {H.n} does not match {p.k} cells")
    if not is_latin_hadamard(H):
        raise ValidationError("signed square is not a Latin-Hadamard matrix")
    roots = p.sqrt()
    O = H.signs * roots[H.square.entries - 1]
    return Eigenbasis(O, p)


def eigenbasis_from_sign_matrix(signs: np.ndarray,
                                p: ProbabilityVector) -> Eigenbasis:
    """Normalize a Hadamard sign matrix into an eigenbasis.

    Only valid for equiprobable p: the first column of signs/sqrt(k) is
    the constant vector 1/sqrt(k) = sqrt(1/k).
    """
    signs = np.asarray(signs)
    return Eigenbasis(signs / math.sqrt(p.k), p)


def decompose(m: CellCounts, p: ProbabilityVector, basis: Eigenbasis,
              rel_tol: float = PARTITION_REL_TOL) -> Decomposition:
    """Project scaled residuals onto the basis columns 2..k.

    The first-column term is omitted because it is identically zero
    (count conservation); the remaining squares sum to X^2 exactly, and
    the identity is re-checked numerically here.
    """
    _check_dims(m, p)
    if basis.k != p.k:
        raise ValidationError("basis does not match the number of cells")
    y = scaled_residuals(m, p)
    components = basis.component_vectors().T @ y
    x2 = pearson_x2(m, p)
    if abs(x2 - np.square(components).sum()) > rel_tol * max(1.0, x2):
        raise InternalConsistencyError(
            "component squares do not reproduce the Pearson statistic")
    return Decomposition(components=components, x2=x2, y=y)


def canonical_signed_square_8() -> SignedLatinSquare:
    """The default 8x8 Latin-Hadamard matrix for component tests.

    Its columns define the T_2..T_8 statistics the power simulation
    reports by default; column 8 is a clean location contrast and
    column 6 an opposite-tails contrast.  Choice vector (-,-,+,-).
    """
    from .coloring import color
    return color(construct_latin_square(3), (-1, -1, 1, -1))


def alternate_signed_square_8() -> SignedLatinSquare:
    """A sibling component basis differing in one free choice.

    Its columns 6 and 8 realize the closed-form T_6 and T_8 below
    (the canonical matrix's columns 6 and 8 differ from them in one
    pair contrast each).  Both bases partition the Pearson statistic;
    the power-study reproduction needs both.  Choice vector (-,-,-,-).
    """
    from .coloring import color
    return color(construct_latin_square(3), (-1, -1, -1, -1))


def _weighted_difference(p_hat, p, a, b) -> float:
    """sqrt(p_b/p_a) * p_hat_a - sqrt(p_a/p_b) * p_hat_b (1-based cells)."""
    a -= 1
    b -= 1
    return (math.sqrt(p[b] / p[a]) * p_hat[a]
            - math.sqrt(p[a] / p[b]) * p_hat[b])


def component_formulas_t2_t6_t8(m: CellCounts, p: ProbabilityVector):
    """Direct weighted-difference evaluation of T_2, T_6, T_8 at k = 8.

    T_2 equals the projection of the scaled residuals onto column 2 of
    the canonical matrix; T_6 and T_8 equal the projections onto
    columns 6 and 8 of the alternate matrix.  Each is a sum of four
    weighted differences of sample proportions, one per cell pair, so
    every cell count enters exactly once.
    """
    _check_dims(m, p)
    if p.k != 8:
        raise ValidationError("the closed-form components are defined for 8 cells")
    p_hat = m.m / m.n
    root_n = math.sqrt(m.n)
    pv = p.p
    t2 = root_n * (_weighted_difference(p_hat, pv, 1, 2)
                   + _weighted_difference(p_hat, pv, 3, 4)
                   + _weighted_difference(p_hat, pv, 5, 6)
                   + _weighted_difference(p_hat, pv, 7, 8))
    t6 = root_n * (_weighted_difference(p_hat, pv, 1, 6)
                   + _weighted_difference(p_hat, pv, 2, 5)
                   - _weighted_difference(p_hat, pv, 3, 8)
                   + _weighted_difference(p_hat, pv, 4, 7))
    t8 = root_n * (_weighted_difference(p_hat, pv, 1, 8)
                   - _weighted_difference(p_hat, pv, 2, 7)
                   + _weighted_difference(p_hat, pv, 3, 6)
                   + _weighted_difference(p_hat, pv, 4, 5))
    return t2, t6, t8


def jacobi_eigenvalues(matrix, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair in turn until the off-diagonal
    Frobenius norm drops below tol.  Ascending order.
    """
    A = np.array(matrix, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or np.abs(A - A.T).max() > 1e-12:
        raise ValidationError("matrix must be symmetric")
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * np.square(np.triu(A, 1)).sum())
        if off < tol:
            break
        for r in range(n - 1):
            for c in range(r + 1, n):
                arc = A[r, c]
                if arc == 0.0:
                    continue
                theta = (A[c, c] - A[r, r]) / (2.0 * arc)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                cos = 1.0 / math.hypot(t, 1.0)
                sin = t * cos
                row_r = A[r].copy()
                row_c = A[c].copy()
                A[r] = cos * row_r - sin * row_c
                A[c] = sin * row_r + cos * row_c
                col_r = A[:, r].copy()
                col_c = A[:, c].copy()
                A[:, r] = cos * col_r - sin * col_c
                A[:, c] = sin * col_r + cos * col_c
                A[r, c] = A[c, r] = 0.0
    else:
        raise InternalConsistencyError("Jacobi iteration failed to converge")
    return np.sort(np.diag(A))


def eigen_interlacing_check(p: ProbabilityVector, tol: float = 1e-9) -> bool:
    """Nonzero eigenvalues of the covariance interlace the sorted cell
    probabilities: p_(1) <= lambda_1 <= p_(2) <= ... <= lambda_(k-1) <= p_(k)."""
    eigenvalues = jacobi_eigenvalues(sigma(p))
    nonzero = eigenvalues[1:]
    sorted_p = np.sort(p.p)
    lower = sorted_p[:-1] - tol
    upper = sorted_p[1:] + tol
    return bool(((nonzero >= lower) & (nonzero <= upper)).all())


def sylvester_hadamard(w: int) -> np.ndarray:
    """Standard-form +/-1 matrix of order 2**w via [[H, H], [H, -H]]."""
    if w < 0 or int(w) != w:
        raise ValidationError(f"order exponent must be a non-negative integer, got {w!r}")
    H = np.array([[1]], dtype=np.int64)
    for _ in range(int(w)):
        H = np.block([[H, H], [H, -H]])
    H.setflags(write=False)
    return H
