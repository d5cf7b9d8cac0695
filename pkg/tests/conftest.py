import pytest

from hyperconf.endalgebra import build_algebra
from hyperconf.objects import Catalog
from hyperconf.poset import Poset

_ALGEBRAS = {}

CRITERIA_RESULTS: dict[int, tuple[bool, str]] = {}


def algebra(n, d):
    key = (n, d)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = build_algebra(Poset(n, d))
    return _ALGEBRAS[key]


@pytest.fixture(scope="session")
def a13():
    return algebra(1, 3)


@pytest.fixture(scope="session")
def a12():
    return algebra(1, 2)


@pytest.fixture(scope="session")
def a24():
    return algebra(2, 4)


@pytest.fixture(scope="session")
def cat13(a13):
    return Catalog(a13)


@pytest.fixture(scope="session")
def cat24(a24):
    return Catalog(a24)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA_RESULTS):
        ok, msg = CRITERIA_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {msg}")
