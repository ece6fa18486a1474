import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sandpile.graph import path_graph, rectangle_graph  # noqa: E402
from sandpile.verify import random_fixture_graphs  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_graphs():
    """Graphs whose sandpile group has order at most 200."""
    out = [rectangle_graph(2, 2), rectangle_graph(2, 3), rectangle_graph(2, 4)]
    out += [path_graph(n) for n in range(2, 9)]
    out += random_fixture_graphs()
    return out
