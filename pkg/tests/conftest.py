import numpy as np
import pytest

from lasso_dantzig import data

# (criterion number, line) pairs filled in by test_acceptance
ACCEPTANCE: list[tuple[int, str]] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    mp.setenv(data.CACHE_ENV, str(tmp_path_factory.mktemp("cache")))
    yield
    mp.undo()


@pytest.fixture(scope="session")
def diabetes_l2():
    return data.standardize(data.diabetes64(), "l2")


def random_instance(seed, n=None, p=None):
    """Centered, unit-norm Gaussian design with a sparse-signal response."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 41)) if n is None else n
    p = int(rng.integers(5, 61)) if p is None else p
    X = rng.standard_normal((n, p))
    X -= X.mean(axis=0)
    X /= np.linalg.norm(X, axis=0)
    beta = np.zeros(p)
    k = min(p, 5)
    beta[:k] = rng.normal(0, 3, size=k)
    y = X @ beta + rng.standard_normal(n)
    y -= y.mean()
    return X, y
