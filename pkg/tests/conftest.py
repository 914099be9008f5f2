import json
import sys
from pathlib import Path

import numpy as np
import pytest

from lpblaschke import Polytope, default_grid

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle_values():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(scope="session")
def oracle_bodies(oracle_values):
    return {k: Polytope.from_vertices(v) for k, v in oracle_values["bodies"].items()}


@pytest.fixture(scope="session")
def grid2():
    return default_grid(2)


@pytest.fixture(scope="session")
def grid3():
    return default_grid(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def square(a=1.0, b=None):
    b = a if b is None else b
    return Polytope.from_vertices([[-a, -b], [a, -b], [a, b], [-a, b]])


def cross():
    return Polytope.from_vertices([[1, 0], [0, 1], [-1, 0], [0, -1]])


def cube():
    return Polytope.from_vertices([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    acceptance.print_results(terminalreporter.write_line)
