"""Replicated simulation comparing Lasso and Dantzig selector coefficient RMSE.

One study fixes a true coefficient vector, then for each replicate draws a
fresh Gaussian design and noise, computes the full Lasso path and a grid of
Dantzig selector fits, and records the RMSE of both estimates against the
truth at every grid point. Grids are expressed as fractions of a
per-replicate maximum so curves from replicates with different scales can
be pooled.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import dantzig, lars
from .data import SynthSpec, draw_beta, draw_design


class Scenario(enum.Enum):
    NP_SPARSE = "np-sparse"
    NP_DENSE = "np-dense"
    PN_SPARSE = "pn-sparse"


class GridKind(enum.Enum):
    L1 = "l1"
    LAMBDA = "lambda"


class ReplicateError(RuntimeError):
    def __init__(self, replicate: int, rep_seed: int, cause: Exception):
        super().__init__(f"replicate {replicate} (rep_seed={rep_seed}) failed: {cause}")
        self.replicate, self.rep_seed = replicate, rep_seed


PRESETS = {
    Scenario.NP_SPARSE: dict(n=25, p=100, k_nonzero=15, coef_sd=4.0, dense=False),
    Scenario.NP_DENSE: dict(n=25, p=100, k_nonzero=100, coef_sd=1.0, dense=True),
    Scenario.PN_SPARSE: dict(n=100, p=25, k_nonzero=5, coef_sd=4.0, dense=False),
}


@dataclass(frozen=True)
class StudyConfig:
    scenario: Scenario
    n: int
    p: int
    k_nonzero: int
    coef_sd: float
    dense: bool = False
    noise_sd: float = 1.0
    reps: int = 100
    grid_kind: GridKind = GridKind.L1
    grid_points: int = 50
    beta_seed: int = 20070101
    master_seed: int = 1000

    @classmethod
    def preset(cls, scenario: Scenario | str, **overrides) -> "StudyConfig":
        scenario = Scenario(scenario)
        fields = dict(PRESETS[scenario])
        fields.update(overrides)
        if "grid_kind" in fields:
            fields["grid_kind"] = GridKind(fields["grid_kind"])
        return cls(scenario=scenario, **fields)

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        self.synth_spec()  # validates n, p, k, scales

    def synth_spec(self) -> SynthSpec:
        return SynthSpec(self.n, self.p, self.k_nonzero, self.coef_sd, self.noise_sd, self.dense)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["scenario"] = self.scenario.value
        d["grid_kind"] = self.grid_kind.value
        return d

    def with_(self, **changes) -> "StudyConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class RmseCurve:
    grid: np.ndarray
    lasso_mean: np.ndarray
    lasso_sd: np.ndarray
    ds_mean: np.ndarray
    ds_sd: np.ndarray
    reps_used: int


def rmse(beta_hat, beta_true) -> float:
    beta_hat, beta_true = np.asarray(beta_hat, float), np.asarray(beta_true, float)
    if beta_hat.shape != beta_true.shape:
        raise ValueError(f"length mismatch: {beta_hat.shape} vs {beta_true.shape}")
    return float(np.sqrt(np.mean((beta_hat - beta_true) ** 2)))


def make_grid(kind: GridKind | str, x_max: float, points: int) -> np.ndarray:
    GridKind(kind)
    if not x_max > 0:
        raise ValueError("x_max must be positive")
    if points < 2:
        raise ValueError("points must be at least 2")
    return np.linspace(0.0, x_max, points)


def default_x_max(kind: GridKind, path: lars.LassoPath) -> float:
    """Final l1 norm of the Lasso path for l1 grids, ``max|X^T y|`` for lambda grids."""
    if GridKind(kind) is GridKind.L1:
        return float(path.l1_norms[-1])
    return float(path.lambdas[0])


def run_replicate(cfg: StudyConfig, beta, rep_seed: int, fractions=None):
    """RMSE vectors ``(lasso, ds)`` for one replicate.

    ``fractions`` (default: ``grid_points`` even steps on [0, 1]) are scaled
    by this replicate's ``default_x_max``.
    """
    if fractions is None:
        fractions = make_grid(cfg.grid_kind, 1.0, cfg.grid_points)
    fractions = np.asarray(fractions, dtype=float)
    X, y = draw_design(cfg.synth_spec(), beta, rep_seed)
    path = lars.lasso_path(X, y)
    x_max = default_x_max(cfg.grid_kind, path)
    grid = fractions * x_max
    if cfg.grid_kind is GridKind.L1:
        lasso = [lars.beta_at_l1(path, s) for s in grid]
        forms = [dantzig.Form1(float(s)) for s in grid]
    else:
        lasso = [lars.beta_at_lambda(path, lam) for lam in grid]
        forms = [dantzig.Form7(float(lam)) for lam in grid]
    lasso_rmse = np.array([rmse(b, beta) for b in lasso])
    ds_rmse = np.array([rmse(dantzig.solve_ds(X, y, f).beta, beta) for f in forms])
    return lasso_rmse, ds_rmse


def _replicate_task(args):
    cfg, beta, rep_seed, fractions = args
    return run_replicate(cfg, beta, rep_seed, fractions)


def run_study(cfg: StudyConfig, workers: int = 1, progress=None) -> RmseCurve:
    """Pointwise mean and sample sd of both RMSE curves over ``cfg.reps`` replicates.

    Replicate ``i`` uses ``rep_seed = master_seed + i``. Results are
    collected in replicate order, so the curve does not depend on
    ``workers``.
    """
    beta = draw_beta(cfg.synth_spec(), cfg.beta_seed)
    fractions = make_grid(cfg.grid_kind, 1.0, cfg.grid_points)
    tasks = [(cfg, beta, cfg.master_seed + i, fractions) for i in range(cfg.reps)]
    lasso = np.empty((cfg.reps, fractions.size))
    ds = np.empty_like(lasso)

    def record(i, result):
        lasso[i], ds[i] = result
        if progress is not None:
            progress(i)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_replicate_task, t) for t in tasks]
            for i, fut in enumerate(futures):
                try:
                    record(i, fut.result())
                except Exception as exc:
                    raise ReplicateError(i, tasks[i][2], exc) from exc
    else:
        for i, t in enumerate(tasks):
            try:
                record(i, _replicate_task(t))
            except Exception as exc:
                raise ReplicateError(i, t[2], exc) from exc

    def sd(a):
        return a.std(axis=0, ddof=1) if a.shape[0] > 1 else np.zeros(a.shape[1])

    return RmseCurve(fractions, lasso.mean(axis=0), sd(lasso), ds.mean(axis=0), sd(ds), cfg.reps)
