from __future__ import annotations

import pytest
from hypothesis import settings, strategies as st

from progeny_select.generators import exhaustive_corpus
from progeny_select.graph import Dag

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def dags(draw, min_n: int = 1, max_n: int = 8) -> Dag:
    """A DAG whose edges respect a drawn permutation of 1..n."""
    n = draw(st.integers(min_n, max_n))
    order = draw(st.permutations(range(1, n + 1)))
    edges = set()
    for a in range(n):
        for b in range(a + 1, n):
            if draw(st.booleans()):
                edges.add((order[a], order[b]))
    return Dag(n, frozenset(edges))


@pytest.fixture(scope="session")
def small_corpus() -> list[Dag]:
    """Every labeled DAG with at most 4 agents."""
    return list(exhaustive_corpus(4))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
