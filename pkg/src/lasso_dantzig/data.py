"""Dataset loading, quadratic expansion, standardization and synthetic draws."""

from __future__ import annotations

import csv
import enum
import itertools
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

DIABETES_RESPONSE = "Y"
CACHE_ENV = "LASSO_DANTZIG_CACHE"


class DataError(ValueError):
    pass


class ParseError(DataError):
    def __init__(self, path, row: int, col: int, value: str):
        super().__init__(f"{path}: row {row}, column {col}: cannot parse {value!r} as a number")
        self.row, self.col = row, col


class ShapeError(DataError):
    def __init__(self, path, row: int, got: int, expected: int):
        super().__init__(f"{path}: row {row} has {got} fields, expected {expected}")
        self.row = row


class ConstantColumn(DataError):
    def __init__(self, name: str):
        super().__init__(f"column {name!r} is constant and cannot be standardized")
        self.name = name


class Standardization(enum.Enum):
    UNIT_L2 = "l2"
    UNIT_VARIANCE = "var"


@dataclass(frozen=True)
class Dataset:
    X_raw: np.ndarray
    y_raw: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        # one memory layout regardless of source, so column reductions
        # round identically for built and cached copies
        object.__setattr__(self, "X_raw", np.ascontiguousarray(self.X_raw, dtype=float))
        object.__setattr__(self, "y_raw", np.ascontiguousarray(self.y_raw, dtype=float))
        n, p = self.X_raw.shape
        if n < 2:
            raise DataError(f"need at least 2 observations, got {n}")
        if self.y_raw.shape != (n,):
            raise DataError(f"response has shape {self.y_raw.shape}, expected ({n},)")
        if len(self.column_names) != p:
            raise DataError(f"{len(self.column_names)} names for {p} columns")
        if len(set(self.column_names)) != p:
            raise DataError("column names are not unique")

    @property
    def n(self) -> int:
        return self.X_raw.shape[0]

    @property
    def p(self) -> int:
        return self.X_raw.shape[1]


@dataclass(frozen=True)
class StandardizedDesign:
    X: np.ndarray
    y: np.ndarray
    mode: Standardization
    column_means: np.ndarray
    column_scales: np.ndarray
    y_mean: float
    column_names: tuple[str, ...] = ()

    def to_original_scale(self, beta) -> tuple[np.ndarray, float]:
        """Coefficients and intercept on the raw predictor scale."""
        b = np.asarray(beta, dtype=float) / self.column_scales
        return b, self.y_mean - float(self.column_means @ b)


@dataclass(frozen=True)
class SynthSpec:
    n: int
    p: int
    k_nonzero: int
    coef_sd: float = 4.0
    noise_sd: float = 1.0
    dense: bool = False

    def __post_init__(self):
        if not 0 <= self.k_nonzero <= self.p:
            raise ValueError(f"k_nonzero={self.k_nonzero} must lie in [0, p={self.p}]")
        if self.coef_sd <= 0 or self.noise_sd < 0:
            raise ValueError("coef_sd must be positive and noise_sd non-negative")


def load_csv(path, response: str = DIABETES_RESPONSE) -> Dataset:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if response not in header:
            raise DataError(f"{path}: response column {response!r} not in header {header}")
        rows = []
        for lineno, fields in enumerate(reader, start=2):
            if not fields or all(not f.strip() for f in fields):
                continue
            if len(fields) != len(header):
                raise ShapeError(path, lineno, len(fields), len(header))
            row = []
            for col, value in enumerate(fields, start=1):
                try:
                    row.append(float(value))
                except ValueError:
                    raise ParseError(path, lineno, col, value) from None
            rows.append(row)
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    if not np.all(np.isfinite(data)):
        raise DataError(f"{path}: non-finite values in body")
    j = header.index(response)
    keep = [i for i in range(len(header)) if i != j]
    return Dataset(data[:, keep], data[:, j], tuple(header[i] for i in keep))


def load_diabetes() -> Dataset:
    """The vendored 442 x 10 diabetes data."""
    with resources.as_file(resources.files(__package__) / "data" / "diabetes.csv") as p:
        return load_csv(p, DIABETES_RESPONSE)


def is_binary(column) -> bool:
    return np.unique(column).size == 2


def expand_quadratic(d: Dataset, center: bool = True) -> Dataset:
    """Main effects, squares of non-binary columns, then all pairwise products.

    Products are taken of the centered main effects (``center=True``), so
    squares and interactions are not dominated by the main effects' means.
    The square of a binary column is affine in the column and is skipped.
    """
    X = d.X_raw
    names = d.column_names
    M = X - X.mean(axis=0) if center else X
    p = d.p
    cols = [X[:, j] for j in range(p)]
    out_names = list(names)
    for j in range(p):
        if not is_binary(X[:, j]):
            cols.append(M[:, j] ** 2)
            out_names.append(f"{names[j]}^2")
    for i, j in itertools.combinations(range(p), 2):
        cols.append(M[:, i] * M[:, j])
        out_names.append(f"{names[i]}:{names[j]}")
    return Dataset(np.column_stack(cols), d.y_raw, tuple(out_names))


def standardize(d: Dataset, mode: Standardization | str = Standardization.UNIT_L2) -> StandardizedDesign:
    mode = Standardization(mode)
    X = d.X_raw
    means = X.mean(axis=0)
    Xc = X - means
    if mode is Standardization.UNIT_L2:
        scales = np.sqrt(np.sum(Xc * Xc, axis=0))
    else:
        scales = Xc.std(axis=0, ddof=1)
    typical = np.maximum(np.abs(X).max(axis=0), 1.0)
    for j in np.flatnonzero(scales <= 1e-12 * typical):
        raise ConstantColumn(d.column_names[j])
    y_mean = float(d.y_raw.mean())
    return StandardizedDesign(
        X=Xc / scales,
        y=d.y_raw - y_mean,
        mode=mode,
        column_means=means,
        column_scales=scales,
        y_mean=y_mean,
        column_names=d.column_names,
    )


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "lasso_dantzig"


def diabetes64(use_cache: bool = True) -> Dataset:
    """The 64-column quadratic diabetes model, cached as CSV after first build."""
    path = cache_dir() / "diabetes64.csv"
    if use_cache and path.exists():
        try:
            return load_csv(path, DIABETES_RESPONSE)
        except DataError:
            pass
    d = expand_quadratic(load_diabetes())
    if use_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            with tmp.open("w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow([*d.column_names, DIABETES_RESPONSE])
                for row, yv in zip(d.X_raw, d.y_raw):
                    w.writerow([repr(float(v)) for v in row] + [repr(float(yv))])
            tmp.replace(path)
        except OSError:
            pass
    return d


def draw_beta(spec: SynthSpec, beta_seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(beta_seed))
    k = spec.p if spec.dense else spec.k_nonzero
    beta = np.zeros(spec.p)
    beta[:k] = rng.normal(0.0, spec.coef_sd, size=k)
    return beta


def draw_design(spec: SynthSpec, beta, rep_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``X`` with i.i.d. N(0, 1) entries and ``y = X beta + noise``."""
    rng = np.random.Generator(np.random.PCG64(rep_seed))
    X = rng.standard_normal((spec.n, spec.p))
    noise = rng.standard_normal(spec.n) * spec.noise_sd
    return X, X @ beta + noise


def generate_synthetic(spec: SynthSpec, beta_seed: int, rep_seed: int):
    """Draw ``(X, y, beta)``.

    ``beta`` depends on ``beta_seed`` only, ``X`` and the noise on
    ``rep_seed`` only. Both streams use numpy's PCG64 bit generator, so a
    given seed pair gives the same draws on every platform.
    """
    beta = draw_beta(spec, beta_seed)
    X, y = draw_design(spec, beta, rep_seed)
    return X, y, beta
