import random
from fractions import Fraction

import pytest
from hypothesis import settings

from semispace.exactcore import QMatrix, rank

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

EXAMPLE_ROWS = [[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]]
EXAMPLE_U = (0, 0, 1, 2, 2)


@pytest.fixture
def example_matrix():
    return QMatrix.from_rows(EXAMPLE_ROWS)


def random_matrix(rng: random.Random, d: int, n: int, lo: int = -2, hi: int = 2, full_rank: bool = True):
    """Random integer ``d x n`` matrix; small entries make non-uniform matroids likely."""
    while True:
        A = QMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(d)])
        if not full_rank or rank(A) == d:
            return A


def generic_matrix(rng: random.Random, d: int, n: int):
    """Random rational matrix whose maximal minors are all nonzero."""
    from itertools import combinations

    while True:
        A = QMatrix.from_rows([[Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(n)]
                               for _ in range(d)])
        if all(rank(A.select_columns(c)) == d for c in combinations(range(n), d)):
            return A


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
