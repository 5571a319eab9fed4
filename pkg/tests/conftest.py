import random
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)

ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def record(criterion: int, title: str, passed: bool) -> None:
    ACCEPTANCE_RESULTS[criterion] = (title, "PASS" if passed else "FAIL")


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, status = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"{status} {n:>2}. {title}")
