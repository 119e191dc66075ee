"""Shared fixtures and the acceptance summary printed at the end of a run."""

import pytest

from morsepacket import coherent, morse, phasespace

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        terminalreporter.write_line("[INFO] criterion 8: scope statement only; full-resolution figure "
                                    "reproduction is not claimed")


@pytest.fixture(scope="session")
def params():
    return morse.HI


@pytest.fixture(scope="session")
def grid():
    return morse.DEFAULT_GRID


@pytest.fixture(scope="session")
def p_axis():
    return phasespace.DEFAULT_P_AXIS


@pytest.fixture(scope="session")
def cv14(params):
    return coherent.cs_coefficients(1.4, params)


@pytest.fixture(scope="session")
def cv25(params):
    return coherent.cs_coefficients(2.5, params)


@pytest.fixture(scope="session")
def parts_by_alpha(grid, params, p_axis, cv14, cv25):
    """Wigner parts at T_rev/8 on the default grids (a few seconds per alpha)."""
    return {cv.alpha: phasespace.wigner_parts_eighth(cv, grid, params, p_axis) for cv in (cv14, cv25)}
