"""Dense linear-algebra kernels for active-set least squares.

Matrices and vectors are plain float64 numpy arrays. ``as_matrix`` and
``as_vector`` validate shape and finiteness at the boundary; everything else
assumes validated input.

The Cholesky routines maintain a lower-triangular factor ``L`` with
``L @ L.T == A`` that can grow (``cholesky_insert``) and shrink
(``cholesky_delete``) one row/column at a time, which is what an active-set
path algorithm needs when variables join and leave the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

PIVOT_RTOL = 1e-12


class NotPositiveDefinite(ValueError):
    """Raised when a pivot falls below ``PIVOT_RTOL`` times the largest diagonal."""


class DimensionError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or infinite entries")
    return m


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-d array, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains NaN or infinite entries")
    return v


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular ``L`` with positive diagonal; immutable."""

    lower: np.ndarray

    def __post_init__(self):
        self.lower.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T

    @classmethod
    def empty(cls) -> "CholeskyFactor":
        return cls(np.zeros((0, 0)))


def matvec(A, x) -> np.ndarray:
    A, x = as_matrix(A), as_vector(x)
    if A.shape[1] != x.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} matrix by length-{x.shape[0]} vector")
    return A @ x


def gram_submatrix(X, active) -> np.ndarray:
    """``X[:, active].T @ X[:, active]`` for an index list ``active``."""
    X = as_matrix(X)
    idx = np.asarray(list(active), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= X.shape[1]):
        raise IndexError(f"active indices {idx.tolist()} out of range for {X.shape[1]} columns")
    XA = X[:, idx]
    return XA.T @ XA


def _pivot_floor(max_diag: float) -> float:
    return PIVOT_RTOL * max(max_diag, 0.0)


def cholesky_factor(A) -> CholeskyFactor:
    A = as_matrix(A)
    k = A.shape[0]
    if A.shape != (k, k):
        raise DimensionError(f"matrix must be square, got {A.shape}")
    if k and np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
        raise ValueError("matrix is not symmetric")
    if k == 0:
        return CholeskyFactor.empty()
    floor = _pivot_floor(float(np.max(np.diag(A))))
    L = np.zeros_like(A)
    for j in range(k):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if d <= floor:
            raise NotPositiveDefinite(f"pivot {j} is {d:.3e}, floor {floor:.3e}")
        L[j, j] = math.sqrt(d)
        L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return CholeskyFactor(L)


def cholesky_insert(factor: CholeskyFactor, cross, diag: float) -> CholeskyFactor:
    """Factor of ``[[A, cross], [cross.T, diag]]`` given the factor of ``A``."""
    cross = as_vector(cross)
    k = factor.dim
    if cross.shape[0] != k:
        raise DimensionError(f"cross has length {cross.shape[0]}, factor has dim {k}")
    L = factor.lower
    w = solve_triangular(L, cross, lower=True) if k else cross
    d = float(diag) - float(w @ w)
    max_diag = max(float(diag), float(np.max(np.sum(L * L, axis=1))) if k else 0.0)
    if d <= _pivot_floor(max_diag):
        raise NotPositiveDefinite(f"new pivot is {d:.3e}")
    out = np.zeros((k + 1, k + 1))
    out[:k, :k] = L
    out[k, :k] = w
    out[k, k] = math.sqrt(d)
    return CholeskyFactor(out)


def cholesky_delete(factor: CholeskyFactor, idx: int) -> CholeskyFactor:
    """Factor of ``A`` with row and column ``idx`` removed.

    Deleting row ``idx`` of ``L`` leaves a lower Hessenberg block below it;
    Givens rotations applied from the right restore triangularity.
    """
    k = factor.dim
    if not 0 <= idx < k:
        raise IndexError(f"index {idx} out of range for factor of dim {k}")
    L = np.delete(factor.lower, idx, axis=0)
    for j in range(idx, k - 1):
        a, b = L[j, j], L[j, j + 1]
        r = math.hypot(a, b)
        c, s = a / r, b / r
        col_j = L[j:, j].copy()
        col_j1 = L[j:, j + 1].copy()
        L[j:, j] = c * col_j + s * col_j1
        L[j:, j + 1] = -s * col_j + c * col_j1
    L = L[:, : k - 1]
    # Rotations can leave a negative diagonal; flip the column sign.
    neg = np.diag(L) < 0
    L[:, neg] *= -1.0
    return CholeskyFactor(np.tril(L))


def solve_spd(factor: CholeskyFactor, b) -> np.ndarray:
    b = as_vector(b)
    if b.shape[0] != factor.dim:
        raise DimensionError(f"rhs has length {b.shape[0]}, factor has dim {factor.dim}")
    if factor.dim == 0:
        return np.zeros(0)
    z = solve_triangular(factor.lower, b, lower=True)
    return solve_triangular(factor.lower.T, z, lower=False)
