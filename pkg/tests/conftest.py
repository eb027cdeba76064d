import pytest

from thzlink.electronics import ElectronicsLinkParams
from thzlink.photonics import PhotonicsLinkParams


@pytest.fixture
def photonics_point():
    """Transmitter 5 dBm into an 18 dB EDFA, LO lasers 19.25 dBm total, RIN -145 dB/Hz."""
    return PhotonicsLinkParams.from_levels()


@pytest.fixture
def electronics_point():
    return ElectronicsLinkParams.from_levels()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1][2:].rstrip(":"))):
            terminalreporter.write_line(line)
