import json
from pathlib import Path

import numpy as np
import pytest

ORACLES = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pairs_to_complex(pairs):
    return np.array([complex(a, b) for a, b in pairs])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
