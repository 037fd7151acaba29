import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from fracsq.catalogue import SQUARES_3_5  # noqa: E402
from fracsq.grid import DigitSet  # noqa: E402


def all_digitsets(n, m):
    from oracles import all_masks

    for mk in all_masks(n, m):
        ys, xs = np.nonzero(mk)
        yield DigitSet.of(n, zip(xs.tolist(), ys.tolist()))


@pytest.fixture(scope="session")
def family_3_5():
    return list(all_digitsets(3, 5))


@pytest.fixture
def M():
    return SQUARES_3_5


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
