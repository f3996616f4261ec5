import numpy as np
import pytest

from pprfix.graph import Graph


def make(n, edges):
    return Graph.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def two_cycle():
    return make(2, [(0, 1), (1, 0)])


@pytest.fixture
def three_cycle():
    return make(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def cluster_into_dangling():
    # {0,1} feeds the dangling cluster {2,3}
    return make(4, [(0, 1), (1, 0), (0, 2), (2, 3), (3, 2)])


@pytest.fixture
def two_disjoint_cycles():
    return make(4, [(0, 1), (1, 0), (2, 3), (3, 2)])


@pytest.fixture
def source_into_cycle():
    return make(3, [(0, 1), (1, 2), (2, 1)])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)
