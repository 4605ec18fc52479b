import json
import math
from pathlib import Path

import numpy as np
import pytest

from gdplab.experiments import ExperimentConfig, nonuniform_run
from gdplab.spectral import Field, Grid

EXPECTED = Path(__file__).parent / "expected"


@pytest.fixture
def torus():
    """The 2 pi torus with 32 nodes."""
    return Grid(2 * math.pi, 32)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


def band_limited(grid, rng, kmax=None, scale=1.0):
    """Random real field with modes |m| <= kmax."""
    kmax = grid.points // 3 if kmax is None else kmax
    c = np.zeros(grid.points // 2 + 1, dtype=complex)
    c[: kmax + 1] = rng.normal(size=kmax + 1) + 1j * rng.normal(size=kmax + 1)
    c[0] = c[0].real
    return Field(grid, scale * np.fft.irfft(c, n=grid.points) * grid.points)


@pytest.fixture(scope="session")
def default_report():
    """The default non-uniform dependence experiment, run once per session."""
    return nonuniform_run(ExperimentConfig())


@pytest.fixture(scope="session")
def reference():
    return json.loads((EXPECTED / "reference_run.json").read_text())


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label, checks, detail=""):
        failed = [name for name, ok in checks.items() if not ok]
        line = "%s  criterion %s" % ("FAIL" if failed else "PASS", label)
        if detail:
            line += ": " + detail
        if failed:
            line += "  [failed: %s]" % ", ".join(failed)
        _VERDICTS.append(line)
        print(line)
        assert not failed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
