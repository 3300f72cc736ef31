"""Least angle regression with the lasso modification.

``lasso_path`` traces the exact minimizer of

    0.5 * ||y - X b||^2 + lam * ||b||_1

for every ``lam`` from ``max|X^T y|`` down to 0. Between breakpoints the
coefficients move linearly along the least-squares equiangular direction of
the active set; a breakpoint happens when an inactive variable's absolute
correlation with the residual catches up with the active ones (join), or an
active coefficient crosses zero (drop).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    CholeskyFactor,
    NotPositiveDefinite,
    as_matrix,
    as_vector,
    cholesky_delete,
    cholesky_insert,
    solve_spd,
)

STEP_TOL = 1e-10
KKT_TOL = 1e-8
FINISH_RTOL = 1e-6


class CollinearActiveSet(RuntimeError):
    def __init__(self, index: int, active):
        super().__init__(f"variable {index} is collinear with active set {list(active)}")
        self.index = index


class Event(enum.Enum):
    JOIN = "join"
    DROP = "drop"
    FINISH = "finish"


@dataclass(frozen=True)
class PathSegment:
    """State at one breakpoint; ``active`` and ``signs`` hold for the segment that starts here."""

    lam: float
    beta: np.ndarray
    active: tuple[int, ...]
    signs: tuple[int, ...]
    l1_norm: float
    event: Event | None = None
    event_index: int | None = None


@dataclass(frozen=True)
class LassoPath:
    segments: tuple[PathSegment, ...]
    p: int
    _lams: np.ndarray = field(init=False, repr=False, compare=False)
    _l1s: np.ndarray = field(init=False, repr=False, compare=False)
    _betas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_lams", np.array([s.lam for s in self.segments]))
        object.__setattr__(self, "_l1s", np.array([s.l1_norm for s in self.segments]))
        object.__setattr__(self, "_betas", np.array([s.beta for s in self.segments]).reshape(-1, self.p))

    @property
    def lambdas(self) -> np.ndarray:
        return self._lams

    @property
    def l1_norms(self) -> np.ndarray:
        return self._l1s

    @property
    def coefs(self) -> np.ndarray:
        """Breakpoint coefficients, shape ``(len(segments), p)``."""
        return self._betas

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class KktReport:
    lam: float
    max_active_violation: float
    max_inactive_excess: float
    sign_consistent: bool
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.max_active_violation <= self.tol
            and self.max_inactive_excess <= self.tol
            and self.sign_consistent
        )


def equiangular_direction(X, active, signs, factor: CholeskyFactor):
    """Unit equiangular vector of the signed active columns.

    Returns ``(w, a, unit_scale)`` where ``u = X[:, active] @ w`` has
    ``X_j^T u = signs_j * unit_scale`` for every active ``j``, ``||u|| = 1``,
    and ``a = X^T u``.
    """
    s = np.asarray(signs, dtype=float)
    g = solve_spd(factor, s)
    denom = float(s @ g)
    if not denom > 0:
        raise CollinearActiveSet(active[-1] if len(active) else -1, active)
    unit_scale = 1.0 / np.sqrt(denom)
    w = unit_scale * g
    u = X[:, list(active)] @ w
    return w, X.T @ u, unit_scale


def step_length(c, a, lam, beta_active, w, active, unit_scale, tol=STEP_TOL):
    """Smallest positive step to the next join, drop, or the end of the path.

    ``c`` are the current correlations ``X^T r``, ``a`` the correlations of
    the equiangular vector. Returns ``(gamma, event, index)``; ties within
    ``tol`` go to the lowest variable index.
    """
    p = c.shape[0]
    finish = lam / unit_scale
    best_gamma, best_event, best_index = finish, Event.FINISH, None

    inactive = np.ones(p, dtype=bool)
    inactive[list(active)] = False
    candidates: list[tuple[float, int, Event]] = []
    if inactive.any():
        idx = np.flatnonzero(inactive)
        ci, ai = c[idx], a[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            g1 = (lam - ci) / (unit_scale - ai)
            g2 = (lam + ci) / (unit_scale + ai)
        g1 = np.where((unit_scale - ai) > tol, g1, np.inf)
        g2 = np.where((unit_scale + ai) > tol, g2, np.inf)
        g = np.minimum(np.where(g1 > tol, g1, np.inf), np.where(g2 > tol, g2, np.inf))
        candidates.extend((float(gj), int(j), Event.JOIN) for gj, j in zip(g, idx) if np.isfinite(gj))
    with np.errstate(divide="ignore", invalid="ignore"):
        gd = -np.asarray(beta_active) / np.asarray(w)
    for gj, j in zip(gd, active):
        if np.isfinite(gj) and gj > tol:
            candidates.append((float(gj), int(j), Event.DROP))

    if candidates:
        gmin = min(cand[0] for cand in candidates)
        if gmin < finish - tol * max(1.0, finish):
            near = [cand for cand in candidates if cand[0] <= gmin + tol * max(1.0, gmin)]
            best_gamma, best_index, best_event = min(near, key=lambda cand: cand[1])
    return best_gamma, best_event, best_index


def _segment(beta, active, signs, lam, event=None, index=None) -> PathSegment:
    b = beta.copy()
    b.setflags(write=False)
    return PathSegment(
        lam=float(lam),
        beta=b,
        active=tuple(active),
        signs=tuple(int(s) for s in signs),
        l1_norm=float(np.abs(b).sum()),
        event=event,
        event_index=index,
    )


def _in_span(factor, X, active, j) -> bool:
    xj = X[:, j]
    try:
        cholesky_insert(factor, X[:, active].T @ xj, float(xj @ xj))
    except NotPositiveDefinite:
        return True
    return False


def lasso_path(X, y, max_steps: int = 500, tol: float = STEP_TOL) -> LassoPath:
    """Entire Lasso solution path by LARS with the lasso modification.

    Columns of ``X`` need not be standardized; no intercept is fitted, so
    center ``X`` and ``y`` first if one is wanted.
    """
    X, y = as_matrix(X), as_vector(y)
    n, p = X.shape
    if y.shape[0] != n:
        raise ValueError(f"X has {n} rows but y has length {y.shape[0]}")
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")

    beta = np.zeros(p)
    c = X.T @ y
    lam = float(np.max(np.abs(c))) if p else 0.0
    active: list[int] = []
    signs: list[int] = []
    factor = CholeskyFactor.empty()
    segments = [_segment(beta, active, signs, lam)]
    if lam <= 0:
        return LassoPath(tuple(segments), p)
    scale = max(1.0, lam)

    def admit(j):
        nonlocal factor
        xj = X[:, j]
        try:
            factor = cholesky_insert(factor, X[:, active].T @ xj, float(xj @ xj))
        except NotPositiveDefinite:
            raise CollinearActiveSet(j, active) from None
        active.append(j)
        signs.append(1 if c[j] > 0 else -1)

    def admit_ties(exclude=None):
        # variables already at the maximal correlation join one by one, lowest index first
        while len(active) < min(n, p):
            inactive = [j for j in range(p) if j not in active and j != exclude]
            tied = [j for j in inactive if abs(c[j]) >= lam - tol * scale]
            if not tied:
                return
            admit(tied[0])

    admit_ties()
    for _ in range(max_steps):
        w, a, unit_scale = equiangular_direction(X, active, signs, factor)
        gamma, event, index = step_length(c, a, lam, beta[active], w, active, unit_scale, tol)
        if event is Event.JOIN and _in_span(factor, X, active, index):
            # a column spanned by the active set only reaches the maximal
            # correlation at lam = 0, so this "join" is the end of the path
            finish = lam / unit_scale
            if gamma < finish * (1 - FINISH_RTOL):
                raise CollinearActiveSet(index, active)
            gamma, event, index = finish, Event.FINISH, None
        beta[active] += gamma * w
        if event is Event.FINISH:
            lam = 0.0
        else:
            lam = lam - gamma * unit_scale
        c = X.T @ (y - X @ beta)

        if event is Event.DROP:
            k = active.index(index)
            beta[index] = 0.0
            factor = cholesky_delete(factor, k)
            del active[k]
            del signs[k]
        elif event is Event.JOIN:
            admit(index)

        if event is Event.FINISH or lam <= tol * scale:
            segments.append(_segment(beta, active, signs, 0.0, Event.FINISH, None))
            break
        admit_ties(exclude=index if event is Event.DROP else None)
        segments.append(_segment(beta, active, signs, lam, event, index))
    return LassoPath(tuple(segments), p)


def beta_at_lambda(path: LassoPath, lam: float) -> np.ndarray:
    """Lasso coefficients at penalty ``lam``, linear between breakpoints."""
    lams, coefs = path.lambdas, path.coefs
    if lam >= lams[0]:
        return np.zeros(path.p)
    if lam <= lams[-1]:
        return coefs[-1].copy()
    # lams strictly decreasing: find k with lams[k] >= lam > lams[k+1]
    k = int(np.searchsorted(-lams, -lam, side="right")) - 1
    t = (lams[k] - lam) / (lams[k] - lams[k + 1])
    return coefs[k] + t * (coefs[k + 1] - coefs[k])


def lambda_at_l1(path: LassoPath, s: float) -> float:
    """Penalty at the first point on the path whose l1 norm reaches ``s``."""
    k, t = _locate_l1(path, s)
    if t is None:
        return float(path.lambdas[k])
    lams = path.lambdas
    return float(lams[k] + t * (lams[k + 1] - lams[k]))


def _locate_l1(path: LassoPath, s: float):
    l1 = path.l1_norms
    if s <= 0:
        return 0, None
    hits = np.flatnonzero(l1 >= s)
    if hits.size == 0:
        return len(l1) - 1, None
    k1 = int(hits[0])
    k = k1 - 1
    t = (s - l1[k]) / (l1[k1] - l1[k])
    return k, t


def beta_at_l1(path: LassoPath, s: float) -> np.ndarray:
    """Lasso coefficients with l1 norm ``s`` (first attainment along the path)."""
    k, t = _locate_l1(path, s)
    coefs = path.coefs
    if t is None:
        return coefs[k].copy()
    return coefs[k] + t * (coefs[k + 1] - coefs[k])


def kkt_check(X, y, beta, lam: float, tol: float = KKT_TOL, zero_tol: float = 0.0) -> KktReport:
    """Check the Lasso optimality conditions at penalty ``lam``.

    Nonzero coefficients need ``X_j^T r == lam * sign(beta_j)``; zero ones
    need ``|X_j^T r| <= lam``.
    """
    X, y, beta = as_matrix(X), as_vector(y), as_vector(beta)
    g = X.T @ (y - X @ beta)
    nz = np.abs(beta) > zero_tol
    active_viol = float(np.max(np.abs(g[nz] - lam * np.sign(beta[nz])))) if nz.any() else 0.0
    excess = float(np.max(np.maximum(np.abs(g[~nz]) - lam, 0.0))) if (~nz).any() else 0.0
    sign_ok = bool(np.all((np.sign(g[nz]) == np.sign(beta[nz])) | (np.abs(g[nz]) <= tol)))
    return KktReport(float(lam), active_viol, excess, sign_ok, tol)
