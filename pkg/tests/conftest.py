import pytest

from allhops import graph_from_edges, parse_graph

F1_TEXT = "3 3\n0 1 1\n1 2 1\n0 2 10\n"
F2_TEXT = "2 2\n0 1 -2\n1 0 3\n"
F3_TEXT = "2 2\n0 1 -2\n1 0 1\n"


@pytest.fixture
def f1():
    return parse_graph(F1_TEXT)


@pytest.fixture
def f2():
    return parse_graph(F2_TEXT)


@pytest.fixture
def f3():
    return parse_graph(F3_TEXT)


@pytest.fixture
def f4():
    return graph_from_edges(4, [(0, 1, 1), (1, 3, 1), (0, 2, 5), (2, 3, -4)])
