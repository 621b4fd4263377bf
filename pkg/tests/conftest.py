from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

from vclab import covertop, jacobian, monodromy, pencil

DATA = Path(__file__).resolve().parents[1] / "src" / "vclab" / "data"

settings.register_profile("vclab", deadline=None)
settings.load_profile("vclab")

ACCEPTANCE_LINES = []


def curve_path(name):
    return DATA / f"{name}.json"


@lru_cache(maxsize=None)
def curve(name):
    return pencil.load_curve(curve_path(name))


@lru_cache(maxsize=None)
def mono(name):
    return monodromy.monodromy_rep(curve(name))


@lru_cache(maxsize=None)
def cover(name):
    return covertop.build_cover(mono(name))


@lru_cache(maxsize=None)
def pair_orbit(name):
    m = mono(name)
    return monodromy.pair_stabilizer(m, monodromy.default_marked_pair(m))


@lru_cache(maxsize=None)
def period_data(name):
    return jacobian.periods(curve(name), cover(name), mono(name).branch)


@pytest.fixture(scope="session")
def shipped():
    """Accessor object for cached pipeline stages of the shipped curves."""

    class Shipped:
        pass

    s = Shipped()
    s.curve, s.mono, s.cover, s.orbit, s.periods = curve, mono, cover, pair_orbit, period_data
    return s


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
