import numpy as np
import pytest

from featad.series_io import TimeSeries


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_series(values, labels=None, sid="s"):
    return TimeSeries(id=sid, values=np.asarray(values, dtype=float), labels=None if labels is None else np.asarray(labels))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
