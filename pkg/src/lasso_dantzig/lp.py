"""Two-phase revised simplex for dense standard-form linear programs.

Solves ``min c^T z  s.t.  A z = b,  z >= 0``.

The basis inverse is kept explicitly and updated with one eta transform per
pivot; it is recomputed from scratch every ``REFACTOR_EVERY`` pivots, or
earlier when the basic solution no longer satisfies ``B x_B = b`` to within
``FEAS_TOL`` (checked every ``DRIFT_CHECK_EVERY`` pivots). Pricing is
Dantzig's largest-coefficient rule, switching to Bland's rule once a phase
has made ``3 * (M + N)`` degenerate pivots.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

from .linalg import as_matrix, as_vector

PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
FEAS_TOL = 1e-9
REFACTOR_EVERY = 50
DRIFT_CHECK_EVERY = 10


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class IterationLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class LpProblem:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c, A, b = as_vector(self.c), as_matrix(self.A), as_vector(self.b)
        M, N = A.shape
        if c.shape[0] != N or b.shape[0] != M:
            raise ValueError(f"inconsistent dimensions: c {c.shape}, A {A.shape}, b {b.shape}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True)
class LpSolution:
    """Result of ``solve``.

    ``basis`` lists the basic column of each row; a redundant row whose
    artificial variable could not be pivoted out is marked ``-1``.
    ``duals`` satisfy ``A^T duals <= c`` at optimality.
    """

    status: Status
    z: np.ndarray
    objective: float
    basis: tuple[int, ...]
    iterations: int
    duals: np.ndarray | None = None


@dataclass(frozen=True)
class OptimalityReport:
    primal_residual: float
    min_nonnegativity: float
    min_reduced_cost: float
    complementarity: float
    duality_gap: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.primal_residual <= self.tol
            and self.min_nonnegativity >= -self.tol
            and self.min_reduced_cost >= -self.tol
            and self.complementarity <= self.tol
            and self.duality_gap <= self.tol
        )


class _Simplex:
    """Working state for one solve; columns ``N..N+n_art-1`` are artificials."""

    def __init__(self, A, b, basis, max_iter):
        self.A = A
        self.b = b
        self.M, self.N_all = A.shape
        self.basis = np.array(basis, dtype=int)
        self.iterations = 0
        self.max_iter = max_iter
        self.delta = FEAS_TOL * (1.0 + float(np.max(np.abs(b), initial=0.0)))
        self.refactor()

    def refactor(self):
        self.Binv = np.asfortranarray(np.linalg.inv(self.A[:, self.basis]))
        self.xB = self.Binv @ self.b
        self.since_refactor = 0

    def pivot(self, r, q, alpha):
        theta = self.xB[r] / alpha[r]
        self.xB -= theta * alpha
        self.xB[r] = theta
        self.basis[r] = q
        row = self.Binv[r] / alpha[r]
        self.Binv = dger(-1.0, alpha, row, a=self.Binv, overwrite_a=True)
        self.Binv[r] = row
        self.iterations += 1
        self.since_refactor += 1
        if self.since_refactor >= REFACTOR_EVERY:
            self.refactor()
        elif self.since_refactor % DRIFT_CHECK_EVERY == 0 and self.drift() > FEAS_TOL:
            self.refactor()

    def drift(self) -> float:
        resid = self.A[:, self.basis] @ self.xB - self.b
        return float(np.max(np.abs(resid))) / (1.0 + float(np.max(np.abs(self.b))))

    def run(self, cost, allowed):
        """Optimize ``cost`` over columns where ``allowed`` is true.

        Returns ``Status.OPTIMAL`` or ``Status.UNBOUNDED``.
        """
        M, N = self.M, self.N_all
        degenerate = 0
        bland = False
        is_basic = np.zeros(N, dtype=bool)
        while True:
            y = cost[self.basis] @ self.Binv
            d = cost - y @ self.A
            is_basic[:] = False
            is_basic[self.basis] = True
            d[is_basic | ~allowed] = 0.0
            if bland:
                cand = np.flatnonzero(d < -OPT_TOL)
                if cand.size == 0:
                    return Status.OPTIMAL
                q = int(cand[0])
            else:
                q = int(np.argmin(d))
                if d[q] >= -OPT_TOL:
                    return Status.OPTIMAL
            alpha = self.Binv @ self.A[:, q]
            pos = np.flatnonzero(alpha > PIVOT_TOL)
            if pos.size == 0:
                return Status.UNBOUNDED
            xb = np.maximum(self.xB[pos], 0.0)
            ratios = xb / alpha[pos]
            if bland:
                tmin = ratios.min()
                ties = pos[ratios <= tmin + 1e-12 * max(1.0, tmin)]
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                # Harris two-pass test: allow basics to go negative by at most
                # delta, then take the largest pivot among the eligible rows
                bound = np.min((xb + self.delta) / alpha[pos])
                eligible = pos[ratios <= bound]
                r = int(eligible[np.argmax(alpha[eligible])])
                tmin = max(self.xB[r], 0.0) / alpha[r]
            if tmin <= 1e-12:
                degenerate += 1
                if degenerate >= 3 * (M + N):
                    bland = True
            if self.iterations >= self.max_iter:
                raise IterationLimit(f"no convergence after {self.iterations} pivots")
            self.xB[r] = max(self.xB[r], 0.0)
            self.pivot(r, q, alpha)

    def x_full(self):
        x = np.zeros(self.N_all)
        x[self.basis] = np.maximum(self.xB, 0.0)
        return x


def solve(problem: LpProblem, max_iter: int | None = None) -> LpSolution:
    c, A, b = problem.c, problem.A, problem.b
    M, N = A.shape
    if max_iter is None:
        max_iter = 50 * (M + N)

    flip = np.where(b < 0, -1.0, 1.0)
    A1 = A * flip[:, None]
    b1 = b * flip

    # crash basis from existing unit columns, artificials elsewhere
    basis = [-1] * M
    col_abs_sum = np.abs(A1).sum(axis=0)
    for j in range(N):
        col = A1[:, j]
        if col_abs_sum[j] == 0:
            continue
        i = int(np.argmax(col))
        if col[i] == 1.0 and col_abs_sum[j] == 1.0 and basis[i] == -1:
            basis[i] = j
    art_rows = [i for i in range(M) if basis[i] == -1]
    n_art = len(art_rows)
    A_ext = np.zeros((M, N + n_art))
    A_ext[:, :N] = A1
    for k, i in enumerate(art_rows):
        A_ext[i, N + k] = 1.0
        basis[i] = N + k

    sx = _Simplex(A_ext, b1, basis, max_iter)
    real = np.zeros(N + n_art, dtype=bool)
    real[:N] = True

    if n_art:
        cost1 = np.zeros(N + n_art)
        cost1[N:] = 1.0
        sx.run(cost1, np.ones(N + n_art, dtype=bool))
        sx.refactor()
        infeas = float(np.sum(sx.x_full()[N:]))
        if infeas > FEAS_TOL * (1.0 + np.max(np.abs(b1))):
            return LpSolution(Status.INFEASIBLE, np.zeros(N), float("nan"), tuple(), sx.iterations)
        _drive_out_artificials(sx, N)

    cost2 = np.zeros(N + n_art)
    cost2[:N] = c
    status = sx.run(cost2, real)
    sx.refactor()
    z = sx.x_full()[:N]
    if status is Status.UNBOUNDED:
        return LpSolution(status, z, float("-inf"), tuple(), sx.iterations)
    y = (cost2[sx.basis] @ sx.Binv) * flip
    basis_out = tuple(int(j) if j < N else -1 for j in sx.basis)
    return LpSolution(Status.OPTIMAL, z, float(c @ z), basis_out, sx.iterations, y)


def _drive_out_artificials(sx: _Simplex, N: int):
    for r in range(sx.M):
        if sx.basis[r] < N:
            continue
        row = sx.Binv[r] @ sx.A[:, :N]
        row[sx.basis[sx.basis < N]] = 0.0
        q = int(np.argmax(np.abs(row)))
        if abs(row[q]) > PIVOT_TOL:
            alpha = sx.Binv @ sx.A[:, q]
            sx.pivot(r, q, alpha)
    sx.refactor()


def check_optimality(problem: LpProblem, sol: LpSolution, tol: float = 1e-8) -> OptimalityReport:
    """Primal feasibility, dual feasibility and complementary slackness of ``sol``.

    Residuals are relative to ``1 + max|b|`` and ``1 + max|c|``.
    """
    c, A, b = problem.c, problem.A, problem.b
    z = sol.z
    bscale = 1.0 + float(np.max(np.abs(b), initial=0.0))
    cscale = 1.0 + float(np.max(np.abs(c), initial=0.0))
    primal = float(np.max(np.abs(A @ z - b), initial=0.0)) / bscale
    nonneg = float(np.min(z, initial=0.0)) / bscale
    if sol.duals is None:
        return OptimalityReport(primal, nonneg, float("-inf"), float("inf"), float("inf"), tol)
    d = c - A.T @ sol.duals
    min_rc = float(np.min(d, initial=0.0)) / cscale
    comp = float(np.max(np.abs(z * d), initial=0.0)) / (bscale * cscale)
    gap = abs(float(c @ z) - float(sol.duals @ b)) / (1.0 + abs(float(c @ z)))
    return OptimalityReport(primal, nonneg, min_rc, comp, gap, tol)
