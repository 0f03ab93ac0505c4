import numpy as np
import pytest

from homcone import named_frames

_ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {name}  ({detail})")


@pytest.fixture
def record_criterion():
    """Record one acceptance criterion outcome for the terminal summary."""

    def record(number, name, ok, detail=""):
        _ACCEPTANCE.append((number, name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {name}  ({detail})")

    return record


@pytest.fixture(scope="session")
def catalog():
    return named_frames()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def vinberg(catalog):
    return catalog["vinberg"]


@pytest.fixture
def witness_T():
    return np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])


@pytest.fixture
def witness_U():
    return np.array([[1.0, 0.0, -1.0], [0.0, 1.0, -1.0], [0.0, 0.0, 1.0]])
