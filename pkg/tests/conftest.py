import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seedbs.signals import make_stairs, make_teeth  # noqa: E402


def noiseless_corpus():
    """Teeth and stairs signals with minimal segment length >= 2."""
    return [
        make_teeth(2, 10, 0, 1),
        make_teeth(3, 7, -1, 1),
        make_teeth(5, 40, 0, 1),
        make_teeth(5, 200, 0, 1),
        make_teeth(7, 9, 0, 2),
        make_teeth(10, 12, 0.0, 0.5),
        make_stairs(2, 8, 1),
        make_stairs(3, 6, -2),
        make_stairs(10, 50, 1),
        make_stairs(4, 20, 0.25),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
