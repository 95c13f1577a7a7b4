import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "l0graph", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("l0graph")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def duplicated_pairs(d=5, pairs=4, seed=0):
    """Unit-norm columns with x_{2k} == x_{2k+1}."""
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((d, pairs))
    base /= np.linalg.norm(base, axis=0)
    return np.repeat(base, 2, axis=1)


def duplicate_of(i):
    return i ^ 1


@pytest.fixture
def dup_data():
    return duplicated_pairs()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record():
    """Append one summary line per acceptance criterion and return ``ok``."""

    def _record(number, name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record
