import numpy as np
import pytest

from chronohurst.persistence import che
from chronohurst.preclean import clean_like_paper
from chronohurst.series import MonthStamp, TimeSeries, load_fixture


@pytest.fixture(scope="session")
def raw():
    return {name: load_fixture(name) for name in ("patents", "trademarks")}


@pytest.fixture(scope="session")
def cleaned(raw):
    return {name: clean_like_paper(s, name).repaired for name, s in raw.items()}


@pytest.fixture(scope="session")
def curves(cleaned):
    return {name: che(s, "rs", 24) for name, s in cleaned.items()}


def monthly(values, start=MonthStamp(2000, 1)):
    return TimeSeries(start, np.asarray(values, dtype=float))


def white_noise(n, seed=0, start=MonthStamp(2000, 1)):
    return monthly(np.random.default_rng(seed).standard_normal(n), start)


@pytest.fixture(scope="session")
def docs():
    from chronohurst.pipeline import PipelineConfig, run_pipeline

    return {name: run_pipeline(PipelineConfig(fixture=name)) for name in ("patents", "trademarks")}


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
