import os
import sys
from pathlib import Path

import pytest

from etcforest.reproduce import PERMUTATION_IDS, permutation, toy_dataset

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def toy():
    return toy_dataset()


@pytest.fixture(scope="session")
def perms():
    return {pid: permutation(pid) for pid in PERMUTATION_IDS}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    os.environ.setdefault("ETC_FOREST_DATA_DIR", str(Path(__file__).parents[1] / "data"))
