import functools
from pathlib import Path

import pytest

from workbench.fixtures import load_fixture
from workbench.plane_graph import read_graph_file

CORPUS = Path(__file__).parent / "data" / "corpus"
B9_HEX = ["u1", "u2", "u3", "u4", "u5", "u6"]


@functools.lru_cache(maxsize=None)
def corpus(name):
    """Graphs of a shipped corpus file, parsed once per session."""
    return tuple(read_graph_file(CORPUS / name))


def planar_upto(n):
    return [g for g in corpus("planar_n1-9.pc.gz") if g.n <= n]


@pytest.fixture
def b9():
    return load_fixture("B9")


@pytest.fixture
def b9_hex():
    return load_fixture("B9", B9_HEX)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
