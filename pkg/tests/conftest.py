import numpy as np
import pytest

from imvs import center, fit, load_prostate

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def prostate():
    return center(load_prostate())


@pytest.fixture(scope="session")
def prostate_fit(prostate):
    return fit(prostate)


def random_dataset(rng, n=40, p=4, signal=None):
    from imvs import Dataset

    X = rng.standard_normal((n, p))
    beta = rng.standard_normal(p) if signal is None else np.asarray(signal, dtype=float)
    y = X @ beta + rng.standard_normal(n)
    return center(Dataset(y, X))
