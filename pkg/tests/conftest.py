from pathlib import Path

import pytest

from varcount.parser import load

DATA = Path(__file__).resolve().parents[1] / "data"

# Worked-example transforms, as printed alongside the second example.
EX42_U = {
    1: [[1, 0, 0], [-2, 0, 1], [11, -1, -4]],
    2: [
        [1, 0, 0, 0, 0, 0],
        [1, 1, -1, 0, 0, 0],
        [-2, -1, 1, 1, 0, 0],
        [8, 6, -6, -4, 0, 1],
        [-1, 5, -2, -1, 2, -3],
        [7, -9, 1, 0, -5, 9],
    ],
    3: [
        [1, 0, 0, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 1, 0, 0, 0, 0],
        [-2, -1, 0, 1, 1, 0, 0, 0, 0],
        [2, 0, 1, 0, -1, 0, -1, 0, 0],
        [-7, -1, -2, 1, 3, 1, 2, 0, 0],
        [-13, -3, -3, 2, 5, 0, 3, 2, 1],
        [-15, 1, 0, 2, 3, 0, 4, -2, 0],
        [16, 0, 4, -2, -6, -1, -5, 2, -1],
        [7, -9, 0, 1, 0, 0, -5, 9, 0],
    ],
}
EX42_V = {
    1: [[1, -2, -6], [0, 1, 2], [0, 0, 1]],
    2: [[1, -2, 2, 0, 10], [0, 1, -2, -1, 10], [0, 0, 1, 1, -15], [0, 0, 0, 0, 1], [0, 0, 0, -1, 17]],
    3: [
        [1, -2, 4, 10, 10, 10, -20],
        [0, 1, -3, -7, -7, -7, 15],
        [0, 0, 1, 2, 2, 2, -5],
        [0, 0, 0, 1, 1, 1, -2],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, -2, -1, 0],
        [0, 0, 0, 0, 1, 0, 0],
    ],
}
EX42_D = {1: (1, 1, 9), 2: (1, 1, 1, 1, 5), 3: (1, 1, 1, 1, 1, 1, 5)}


@pytest.fixture(scope="session")
def ex41():
    return load((DATA / "ex41.vsys").read_text())


@pytest.fixture(scope="session")
def ex42():
    return load((DATA / "ex42.vsys").read_text())


# -- acceptance summary ---------------------------------------------------------

CRITERIA: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{CRITERIA[name]:4}  {name}")
