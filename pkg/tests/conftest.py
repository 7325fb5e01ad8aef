import sys
from pathlib import Path

import pytest

from latticelinks.core import LatticeLink, parse_link

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

U4 = LatticeLink.from_vertices([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
H8 = LatticeLink.from_vertices(
    [(0, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0)],
    [(1, 1, -1), (1, 1, 1), (1, 3, 1), (1, 3, -1)],
)
# the two squares of U4 side by side in z=0
COPLANAR = LatticeLink.from_vertices(
    [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)],
    [(3, 0, 0), (4, 0, 0), (4, 1, 0), (3, 1, 0)],
)


def data_link(name: str) -> LatticeLink:
    return parse_link((DATA / name).read_text())


@pytest.fixture
def u4():
    return U4


@pytest.fixture
def h8():
    return H8


TREFOIL12 = data_link("trefoil12.link")

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
