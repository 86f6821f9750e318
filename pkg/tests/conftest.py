import numpy as np
import pytest

from ucmvdr.array_model import SourceSpec, UlaGeometry, UlaScenario

# lines collected by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for a criterion, then assert it."""

    def record(number, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def one_interferer(n=11, u=None, inr_db=40.0, u0=0.0):
    """The standard test scene: N sensors, one interferer at 3/N by default."""
    u = 3.0 / n if u is None else u
    return UlaScenario(UlaGeometry(n), u0, (SourceSpec.from_db(u, inr_db),))


@pytest.fixture
def scene11():
    return one_interferer()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_distortionless(rng, n, u0=0.0):
    """Gaussian weights rescaled so that ``w^H v(u0) = 1``."""
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v0 = np.exp(-1j * np.pi * u0 * np.arange(n))
    return w / np.conj(np.vdot(w, v0))
