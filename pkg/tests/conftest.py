import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from capmeasure import CapStructure, Carrier, ex

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GRID = ("0", "1/2", "1", "2", "3", "inf")


@pytest.fixture
def S2():
    return CapStructure(Carrier(("a", "b")), [["0", "2"], ["3", "0"]])


@pytest.fixture
def ab():
    return Carrier(("a", "b"))


def labels(n):
    return tuple("abcd"[:n])


@st.composite
def matrices(draw, n=None, lo=1, hi=3, grid=GRID):
    n = draw(st.integers(lo, hi)) if n is None else n
    return [[("0" if i == j else draw(st.sampled_from(grid))) for j in range(n)] for i in range(n)]


@st.composite
def spaces(draw, n=None, lo=1, hi=3, grid=GRID):
    M = draw(matrices(n=n, lo=lo, hi=hi, grid=grid))
    return CapStructure(Carrier(labels(len(M))), M)


ext_values = st.one_of(
    st.fractions(min_value=0, max_value=50, max_denominator=12).map(ex),
    st.just(ex("inf")),
)


# acceptance criteria report one line each at the end of the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
