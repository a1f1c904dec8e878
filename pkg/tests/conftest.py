import pytest

from a2boundary.building import build_chamber_ball
from a2boundary.group import Group
from a2boundary.shift import (
    build_hexagon_alphabet,
    build_tile_alphabet,
    build_transition_M,
    build_transition_N,
)

RADIUS = 12


@pytest.fixture(scope="session")
def group():
    return Group.from_preset("paper-q2")


@pytest.fixture(scope="session")
def small_ball(group):
    return build_chamber_ball(group, 5)


@pytest.fixture(scope="session")
def ball(group):
    return build_chamber_ball(group, RADIUS)


@pytest.fixture(scope="session")
def alphabets(ball):
    return build_tile_alphabet(ball), build_hexagon_alphabet(ball)


@pytest.fixture(scope="session")
def matrices(ball, alphabets):
    A, L = alphabets
    M = tuple(build_transition_M(j, ball, A) for j in (1, 2))
    N = tuple(build_transition_N(j, ball, L) for j in (1, 2))
    return M, N


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, msg in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
