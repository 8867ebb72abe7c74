import sys
import time
from pathlib import Path

import pytest

from latmass.solver import solve_masses

# let test modules borrow each other's oracles regardless of import mode
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def table8():
    return solve_masses(8)


@pytest.fixture(scope="session")
def table16():
    return solve_masses(16)


@pytest.fixture(scope="session")
def table24():
    """Full dim-24 mass table plus the wall-clock seconds it took to solve."""
    start = time.perf_counter()
    table = solve_masses(24)
    return table, time.perf_counter() - start
