"""Dantzig selector as a linear program.

Two parametrizations are supported:

* ``Form1(s)``: minimize ``||X^T (y - X b)||_inf`` subject to ``||b||_1 <= s``
* ``Form7(lam)``: minimize ``||b||_1`` subject to ``||X^T (y - X b)||_inf <= lam``

Both are written over ``b = u - v`` with ``u, v >= 0`` and handed to
``lp.solve`` in standard form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import lp
from .linalg import as_matrix, as_vector

NONZERO_TOL = 1e-8


class DsSolverError(RuntimeError):
    pass


class ParameterKind(enum.Enum):
    L1_BOUND = "l1"
    GRADIENT_BOUND = "lambda"


@dataclass(frozen=True)
class Form1:
    s: float


@dataclass(frozen=True)
class Form7:
    lam: float


@dataclass(frozen=True)
class DsSolution:
    beta: np.ndarray
    achieved_linf: float
    achieved_l1: float
    nonzero: tuple[int, ...]
    lp_iterations: int
    lp_objective: float


@dataclass(frozen=True)
class DsPath:
    grid: np.ndarray
    solutions: tuple[DsSolution, ...]
    kind: ParameterKind

    @property
    def coefs(self) -> np.ndarray:
        return np.array([s.beta for s in self.solutions])


@dataclass(frozen=True)
class ResidualStats:
    inner_products: np.ndarray
    linf: float
    rss: float
    mse: float


def _gram(X, y):
    X, y = as_matrix(X), as_vector(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has length {y.shape[0]}")
    return X.T @ X, X.T @ y


def build_lp_form7(X, y, lam: float) -> lp.LpProblem:
    """Variables ``[u, v, slack_hi, slack_lo]``, ``4p`` columns and ``2p`` rows."""
    if lam < 0:
        raise ValueError("lam must be non-negative")
    G, c0 = _gram(X, y)
    p = G.shape[0]
    I, Z = np.eye(p), np.zeros((p, p))
    A = np.block([[-G, G, I, Z], [G, -G, Z, I]])
    b = np.concatenate([lam - c0, lam + c0])
    cost = np.concatenate([np.ones(2 * p), np.zeros(2 * p)])
    return lp.LpProblem(cost, A, b)


def build_lp_form1(X, y, s: float) -> lp.LpProblem:
    """Variables ``[u, v, t, slack_hi, slack_lo, slack_l1]``, ``4p + 2`` columns, ``2p + 1`` rows."""
    if s < 0:
        raise ValueError("s must be non-negative")
    G, c0 = _gram(X, y)
    p = G.shape[0]
    one = np.ones((p, 1))
    I, Z = np.eye(p), np.zeros((p, p))
    zc = np.zeros((p, 1))
    top = np.hstack([-G, G, -one, I, Z, zc])
    mid = np.hstack([G, -G, -one, Z, I, zc])
    bottom = np.concatenate([np.ones(2 * p), [0.0], np.zeros(2 * p), [1.0]])[None, :]
    A = np.vstack([top, mid, bottom])
    b = np.concatenate([-c0, c0, [s]])
    cost = np.zeros(4 * p + 2)
    cost[2 * p] = 1.0
    return lp.LpProblem(cost, A, b)


def residual_stats(X, y, beta) -> ResidualStats:
    X, y, beta = as_matrix(X), as_vector(y), as_vector(beta)
    r = y - X @ beta
    g = X.T @ r
    rss = float(r @ r)
    return ResidualStats(g, float(np.max(np.abs(g), initial=0.0)), rss, rss / X.shape[0])


def solve_ds(X, y, form: Form1 | Form7) -> DsSolution:
    X, y = as_matrix(X), as_vector(y)
    p = X.shape[1]
    if isinstance(form, Form1):
        problem = build_lp_form1(X, y, form.s)
    elif isinstance(form, Form7):
        problem = build_lp_form7(X, y, form.lam)
    else:
        raise TypeError(f"unknown form {form!r}")
    sol = lp.solve(problem)
    if sol.status is not lp.Status.OPTIMAL:
        raise DsSolverError(f"{form}: LP returned {sol.status.value}")
    u, v = sol.z[:p], sol.z[p:2 * p]
    beta = u - v
    # round-off from the basis inverse, not a real coefficient
    beta[np.abs(beta) <= 1e-14 * max(1.0, float(np.max(np.abs(beta), initial=0.0)))] = 0.0
    stats = residual_stats(X, y, beta)
    return DsSolution(
        beta=beta,
        achieved_linf=stats.linf,
        achieved_l1=float(np.abs(beta).sum()),
        nonzero=tuple(int(j) for j in np.flatnonzero(np.abs(beta) > NONZERO_TOL)),
        lp_iterations=sol.iterations,
        lp_objective=sol.objective,
    )


def ds_path_grid(X, y, kind: ParameterKind | str, grid) -> DsPath:
    kind = ParameterKind(kind)
    grid = as_vector(grid)
    if grid.size and (np.any(grid < 0) or np.any(np.diff(grid) <= 0)):
        raise ValueError("grid must be non-negative and strictly increasing")
    make = Form1 if kind is ParameterKind.L1_BOUND else Form7
    sols = []
    for value in grid:
        try:
            sols.append(solve_ds(X, y, make(float(value))))
        except (DsSolverError, lp.IterationLimit) as exc:
            raise DsSolverError(f"grid value {value!r}: {exc}") from exc
    return DsPath(grid, tuple(sols), kind)
