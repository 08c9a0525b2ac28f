import random

import pytest

from basicvar.roots import BasicSubset, enumerate_basic

EXAMPLE_8 = BasicSubset.of(8, (4, 1), (7, 2), (8, 3), (5, 4))
EXAMPLE_7 = BasicSubset.of(7, (4, 1), (5, 2), (6, 3), (7, 5))

GRID_8 = ["", "+", "+ +", "x - -", "* + + x", "* + + * *", "* x - + - -", "* * x x - - -"]
GRID_7 = ["", "+", "+ +", "x - -", "* x - +", "* * x x -", "* * * * x x"]

ALL_UP_TO_6 = [D for n in range(1, 7) for D in enumerate_basic(n)]
ALL_UP_TO_5 = [D for D in ALL_UP_TO_6 if D.n <= 5]


def random_subsets(count=50, seed=2024, max_n=6):
    """A fixed sample of nonempty-board basic subsets with n <= max_n."""
    pool = [D for D in ALL_UP_TO_6 if 2 <= D.n <= max_n]
    return random.Random(seed).sample(pool, count)


@pytest.fixture
def d8():
    return EXAMPLE_8


@pytest.fixture
def d7():
    return EXAMPLE_7


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
