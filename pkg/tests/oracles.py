"""Reference computations that share no code with the package."""

import itertools

import numba
import numpy as np


def matvec_loops(A, x):
    rows, cols = len(A), len(A[0])
    out = [0.0] * rows
    for i in range(rows):
        for j in range(cols):
            out[i] += A[i][j] * x[j]
    return out


def soft_threshold(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


@numba.njit(cache=True)
def _cd_sweeps(G, c, lam, tol, max_sweeps):
    p = c.shape[0]
    b = np.zeros(p)
    grad = c.copy()  # c - G b
    for _ in range(max_sweeps):
        moved = 0.0
        for j in range(p):
            z = grad[j] + G[j, j] * b[j]
            new = 0.0
            if z > lam:
                new = (z - lam) / G[j, j]
            elif z < -lam:
                new = (z + lam) / G[j, j]
            d = new - b[j]
            if d != 0.0:
                for k in range(p):
                    grad[k] -= G[k, j] * d
                b[j] = new
                if abs(d) > moved:
                    moved = abs(d)
        if moved < tol:
            break
    return b


def lasso_cd(X, y, lam, tol=1e-10, max_sweeps=2_000_000):
    """Minimize 0.5||y - Xb||^2 + lam ||b||_1 by cyclic coordinate minimization.

    Each coordinate update is an exact soft-threshold; sweeps stop when no
    coefficient moves by more than ``tol``.
    """
    return _cd_sweeps(X.T @ X, X.T @ y, float(lam), tol, max_sweeps)


def lp_vertex_enumeration(c, A, b, tol=1e-10):
    """Minimum of c^T z over all basic feasible solutions of A z = b, z >= 0.

    Returns ``(objective, z)``, or ``(None, None)`` if no basis is feasible.
    Assumes the optimum is attained (bounded LP).
    """
    M, N = A.shape
    best, best_z = None, None
    for cols in itertools.combinations(range(N), M):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if np.any(xb < -tol * (1 + np.abs(b).max())):
            continue
        z = np.zeros(N)
        z[list(cols)] = xb
        val = float(c @ z)
        if best is None or val < best:
            best, best_z = val, z
    return best, best_z


def ds_form7_grid_search(X, y, lam, box=2.0, coarse=0.02, fine=1e-3, span=0.05):
    """min ||b||_1 s.t. ||X^T(y - Xb)||_inf <= lam over a grid, for p = 3.

    A coarse grid over [-box, box]^3 locates the best feasible cell, then a
    grid at resolution ``fine`` searches a ``span`` neighbourhood of it.
    """
    G, c = X.T @ X, X.T @ y

    def best_on(axes):
        B = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        grad = c[None, :] - B @ G.T
        ok = np.max(np.abs(grad), axis=1) <= lam
        if not ok.any():
            return None, None
        l1 = np.abs(B).sum(axis=1)
        l1[~ok] = np.inf
        k = int(np.argmin(l1))
        return l1[k], B[k]

    ax = np.arange(-box, box + coarse / 2, coarse)
    _, b0 = best_on([ax] * 3)
    if b0 is None:
        return None
    axes = [np.arange(v - span, v + span + fine / 2, fine) for v in b0]
    val, _ = best_on(axes)
    return val
