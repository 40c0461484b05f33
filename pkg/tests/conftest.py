import numpy as np
import pytest

from seqspace.kernel import DTYPE

TAUS = (0.0, 0.3, 0.5, 1.0, 1.7)
N_GRID = 32


def weight_grid(N):
    k = np.arange(1, N + 1, dtype=DTYPE)
    return {
        "e": np.ones(N, dtype=DTYPE),
        "k": k,
        "geom0.9": DTYPE(0.9) ** k,
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
