import numpy as np
import pytest
from hypothesis import strategies as st

from digraphconn.graph import DiGraph


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run searches that take many minutes")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@st.composite
def digraphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    slots = [(t, h) for t in range(1, n + 1) for h in range(1, n + 1) if t != h]
    mask = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    return DiGraph(n, tuple(a for a, keep in zip(slots, mask) if keep))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
