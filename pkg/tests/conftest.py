from functools import lru_cache

import pytest

from affine_reduction.affine import AffineWeylGroup
from affine_reduction.rootdata import build_root_datum


@lru_cache(maxsize=None)
def group(label: str, isogeny: str | None = None) -> AffineWeylGroup:
    """Shared groups so the memo tables are reused across tests."""
    return AffineWeylGroup(build_root_datum(label, isogeny))


@pytest.fixture
def A1():
    return group("A1")


@pytest.fixture
def A2():
    return group("A2")


@pytest.fixture
def GL2():
    return group("GL2")


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
