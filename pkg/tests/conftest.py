import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bieberbach.tables import build_a_table, build_b_table


@pytest.fixture(scope="session")
def b8():
    return build_b_table(8)


@pytest.fixture(scope="session")
def a8():
    return build_a_table(8)
