import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cpgeo import library  # noqa: E402
from cpgeo.structfile import build  # noqa: E402
from cpgeo.connection import levi_civita  # noqa: E402
from cpgeo.contact_pair import validate  # noqa: E402


class Instance:
    def __init__(self, name):
        self.name = name
        self.model = build(library.load(name))
        m = self.model
        self.validation = validate(m.algebra, m.alpha1, m.alpha2, m.phi, m.metric)
        self.cps = self.validation.structure
        self.conn = levi_civita(m.algebra, m.metric)
        self.L = m.algebra
        self.g = m.metric
        self.e = [m.algebra.basis(i) for i in range(m.algebra.dim)]

    def vec(self, label):
        return self.e[self.L.index(label)]


_CACHE = {}


def instance(name):
    if name not in _CACHE:
        _CACHE[name] = Instance(name)
    return _CACHE[name]


@pytest.fixture(scope="session")
def g6():
    return instance("g6")


@pytest.fixture(scope="session")
def h6():
    return instance("h6")


@pytest.fixture(scope="session")
def heis():
    return instance("heis3xR")


@pytest.fixture(scope="session")
def products():
    return instance("products")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
