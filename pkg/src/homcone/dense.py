"""Dense kernels for small symmetric matrices.

Matrices are plain ``numpy`` arrays. Orders are tiny (a few dozen at most),
so everything is written as straightforward elimination loops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, NotPSD

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_square",
    "as_symmetric",
    "cholesky_type",
    "is_positive_definite",
    "matrix_rank",
    "frobenius_inner",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by every numerical decision.

    A quantity is treated as zero when its magnitude is at most
    ``abs_eps + rel_eps * scale`` for the scale relevant to the check.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if not (self.abs_eps > 0 and self.rel_eps > 0):
            raise ValueError("tolerances must be strictly positive")

    def threshold(self, scale: float = 0.0) -> float:
        return self.abs_eps + self.rel_eps * abs(float(scale))


DEFAULT_TOL = Tolerance()


def as_square(X, name: str = "X") -> np.ndarray:
    A = np.asarray(X, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    return A


def as_symmetric(X, tol: Tolerance = DEFAULT_TOL, name: str = "X") -> np.ndarray:
    """Return an exactly symmetric copy of ``X``, rejecting visibly asymmetric input."""
    A = as_square(X, name)
    scale = np.max(np.abs(A))
    if np.max(np.abs(A - A.T)) > tol.threshold(scale):
        raise ValueError(f"{name} is not symmetric")
    return (A + A.T) / 2.0


def _pivot_threshold(X: np.ndarray, tol: Tolerance) -> float:
    return tol.threshold(max(float(np.max(np.diag(X))), 0.0))


def cholesky_type(X, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Cholesky-type factor of a positive semidefinite matrix.

    Returns the upper triangular ``T`` with ``T.T @ T == X``, nonnegative
    diagonal, and every row whose pivot is (numerically) zero set to zero.
    This is the unique factor with that zero-row property.

    Raises
    ------
    NotPSD
        If a pivot is below ``-threshold`` or a zero pivot leaves a nonzero
        remainder in its row.
    """
    A = as_symmetric(X, tol)
    n = A.shape[0]
    thr = _pivot_threshold(A, tol)
    scale = max(float(np.max(np.diag(A))), thr)
    # |remainder| <= sqrt(pivot * other pivot) for PSD input
    row_thr = np.sqrt(thr * scale) + thr
    T = np.zeros_like(A)
    for i in range(n):
        row = A[i, i:] - T[:i, i] @ T[:i, i:]
        pivot = row[0]
        if pivot > thr:
            d = np.sqrt(pivot)
            T[i, i] = d
            T[i, i + 1:] = row[1:] / d
        elif pivot < -thr:
            raise NotPSD(f"pivot {pivot:.3e} at row {i} is negative")
        elif row.size > 1 and np.max(np.abs(row[1:])) > row_thr:
            raise NotPSD(f"zero pivot at row {i} with nonzero remainder")
    return T


def is_positive_definite(X, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff plain Cholesky succeeds with every pivot above the threshold."""
    A = np.asarray(X, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        return False
    if np.max(np.abs(A - A.T)) > tol.threshold(np.max(np.abs(A))):
        return False
    A = (A + A.T) / 2.0
    thr = _pivot_threshold(A, tol)
    n = A.shape[0]
    L = np.zeros_like(A)
    for i in range(n):
        pivot = A[i, i] - L[i, :i] @ L[i, :i]
        if pivot <= thr:
            return False
        L[i, i] = np.sqrt(pivot)
        L[i + 1:, i] = (A[i + 1:, i] - L[i + 1:, :i] @ L[i, :i]) / L[i, i]
    return True


def matrix_rank(X, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank by Gaussian elimination with complete pivoting.

    Pivots at most ``tol.threshold(max |X_ij|)`` in magnitude count as zero.
    """
    A = np.array(as_square(X), dtype=float)
    thr = tol.threshold(np.max(np.abs(A)))
    rank = 0
    while A.size:
        p, q = np.unravel_index(np.argmax(np.abs(A)), A.shape)
        pivot = A[p, q]
        if abs(pivot) <= thr:
            break
        A = A - np.outer(A[:, q], A[p, :]) / pivot
        A = np.delete(np.delete(A, p, axis=0), q, axis=1)
        rank += 1
    return rank


def frobenius_inner(X, Y) -> float:
    """Trace inner product ``trace(X.T @ Y)``."""
    A = np.asarray(X, dtype=float)
    B = np.asarray(Y, dtype=float)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    return float(np.sum(A * B))
