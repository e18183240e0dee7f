import sys

import pytest

sys.setrecursionlimit(100_000)

from lamclock.combinators import standard_definitions


@pytest.fixture(scope="session")
def defs():
    return standard_definitions()
