import itertools

import pytest
from hypothesis import strategies as st

from tsde.graph_core import ColouredGraph, compose, inverse


def perms(k):
    return st.permutations(list(range(1, k + 1))).map(tuple)


@st.composite
def graphs(draw, D=None, k=None, max_k=4):
    D = D or draw(st.integers(2, 5))
    k = k or draw(st.integers(1, max_k))
    return ColouredGraph(D, k, tuple(draw(perms(k)) for _ in range(D)))


def brute_aut(g):
    """Pairs (sigma on blacks, pi on whites) fixing every colour, counted directly."""
    n = 0
    for pi in itertools.permutations(range(1, g.k + 1)):
        for sigma in itertools.permutations(range(1, g.k + 1)):
            if all(compose(sigma, compose(t, inverse(pi))) == t for t in g.tau):
                n += 1
    return n


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    monkeypatch.setenv("TSDE_BACKEND", request.param)
    return request.param


_RESULTS = {}


@pytest.fixture
def record(request):
    """Store one PASS/FAIL line for the acceptance summary."""
    def _rec(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        _RESULTS[request.node.nodeid] = line
        print(line)
        return ok
    return _rec


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for nodeid in sorted(_RESULTS):
            terminalreporter.write_line(_RESULTS[nodeid])
